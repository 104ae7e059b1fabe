#![allow(dead_code)]

pub mod diffs;
pub mod rerank;
pub mod signatures;
pub mod usage;

use std::path::{Path, PathBuf};

use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use synbc_core::config::RunConfig;
use synbc_core::dataset::{load_manifest, LoadedManifest, RepairSample};
use synbc_core::pipeline::{stage_prompt, Staged};
use synbc_core::provider::replay_key;
use synbc_core::rerank::Scorer;

pub const FIG1: &str = "alluxio-mount";
pub const CATALOG: &str = "catalog-names";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn manifest() -> LoadedManifest {
    load_manifest(&fixtures().join("manifest.json")).expect("fixture manifest loads")
}

pub fn sample(id: &str) -> RepairSample {
    manifest().samples.into_iter().find(|s| s.id == id).expect("fixture sample exists")
}

pub fn staged(id: &str) -> Staged {
    stage_prompt(&sample(id), &RunConfig::default(), None, &Scorer::Lexical).expect("fixture stages")
}

/// Replay config reading from `dir`.
pub fn replay_config(dir: &Path, out: &Path) -> RunConfig {
    RunConfig {
        replay_dir: Some(dir.to_path_buf()),
        out: out.to_path_buf(),
        jobs: Some(2),
        ..RunConfig::default()
    }
}

/// Writes a replay response for every sample's repair prompt, produced by
/// `reply` from the sample and its staged prompt.
pub fn seed_replay(dir: &Path, reply: impl Fn(&RepairSample, &Staged) -> String) {
    std::fs::create_dir_all(dir).unwrap();
    for s in manifest().samples {
        let st = stage_prompt(&s, &RunConfig::default(), None, &Scorer::Lexical).unwrap();
        let key = replay_key(&st.prompt.messages());
        std::fs::write(dir.join(format!("{key}.txt")), reply(&s, &st)).unwrap();
    }
}

pub fn fenced(code: &str) -> String {
    format!("```java\n{}\n```\n", code.trim_end())
}

/// `n` values drawn from `strategy` with a fixed seed.
pub fn draw<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n).map(|_| strategy.new_tree(&mut runner).expect("strategy yields values").current()).collect()
}
