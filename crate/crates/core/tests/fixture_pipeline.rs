mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::{fenced, seed_replay, staged, CATALOG, FIG1};
use synbc_core::config::RunConfig;
use synbc_core::pipeline::{evaluate_dataset, run_sample, score_run, write_report};
use synbc_core::prompt::{assemble_prompt, DEFAULT_TOKEN_CAP, SYSTEM_TEXT, TASK_TEXT};
use synbc_core::provider::ReplayProvider;
use synbc_core::rerank::{lexical_scores, tokenize, RankedBundle, Scorer};
use synbc_core::signature::SynBCKind;

const GET_DEFAULT_INSTANCE: &str = "public static MountPOptions getDefaultInstance();";

#[test]
fn mount_sample_is_a_parameter_change() {
    let st = staged(FIG1);
    assert_eq!(st.prepared.focal.kinds, SynBCKind { param: true, ret: false, norm: false });
    assert_eq!(st.prepared.focal.kinds.to_string(), "ParamSynBC");
}

#[test]
fn class_ctx_lists_accessible_members_of_the_new_type() {
    let st = staged(FIG1);
    let [group] = st.bundle.class_ctx.as_slice() else { panic!("one new type expected") };
    assert_eq!(group.type_name, "MountPOptions");
    assert!(group.tags.param && !group.tags.ret);
    let texts: Vec<&str> = group.chunks.iter().map(|c| c.scoring_text()).collect();
    assert!(texts.contains(&GET_DEFAULT_INSTANCE));
    // Private fields, the private constructor and the nested builder's members stay out.
    assert!(texts.iter().all(|t| !t.contains("readOnly_") && !t.contains("private") && !t.contains("setShared")));
}

/// idf-weighted cosine over hand-tokenized documents.
fn hand_scores(query: &[&str], docs: &[&[&str]]) -> Vec<f64> {
    let n = docs.len() as f64;
    let sets: Vec<BTreeSet<&str>> = docs.iter().map(|d| d.iter().copied().collect()).collect();
    let weight = |t: &str| {
        let df = sets.iter().filter(|s| s.contains(t)).count() as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    };
    let q: BTreeSet<&str> = query.iter().copied().collect();
    let qn = q.iter().map(|t| weight(t).powi(2)).sum::<f64>().sqrt();
    sets.iter()
        .map(|d| {
            let dot: f64 = d.intersection(&q).map(|t| weight(t).powi(2)).sum();
            let dn = d.iter().map(|t| weight(t).powi(2)).sum::<f64>().sqrt();
            if dot == 0.0 { 0.0 } else { dot / (qn * dn) }
        })
        .collect()
}

#[test]
fn lexical_scorer_ranks_get_default_instance_first() {
    let st = staged(FIG1);
    let chunks = &st.bundle.class_ctx[0].chunks;
    let docs: Vec<&str> = chunks.iter().map(|c| c.scoring_text()).collect();
    let tokens: [&[&str]; 11] = [
        &["public", "static", "final", "int", "readonly", "field", "number", "1"],
        &["public", "static", "final", "int", "shared", "field", "number", "2"],
        &["public", "static", "mount", "p", "option", "get", "default", "instance"],
        &["public", "mount", "p", "option", "get", "default", "instance", "for", "type"],
        &["public", "boolean", "has", "read", "only"],
        &["public", "boolean", "get", "read", "only"],
        &["public", "boolean", "get", "shared"],
        &["public", "static", "builder", "new"],
        &["public", "byte", "to", "array"],
        &["public", "boolean", "is", "initialized"],
        &["public", "abstract", "byte", "to", "array"],
    ];
    assert_eq!(docs.len(), tokens.len());
    for (doc, expected) in docs.iter().zip(tokens) {
        let got: BTreeSet<String> = tokenize(doc).into_iter().collect();
        let want: BTreeSet<String> = expected.iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want, "tokens of {doc}");
    }
    let query = "MountOptions.defaults()";
    let oracle = hand_scores(&["mount", "option", "default"], &tokens);
    let scores = lexical_scores(query, &docs);
    for (a, b) in scores.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-9, "{scores:?} vs {oracle:?}");
    }
    // Worked by hand: ln(4.8)^2 * 3 / (|q| |d|) with |q| = 2.7169, |d| = 3.7721.
    assert!((scores[2] - 0.7203).abs() < 1e-4, "{}", scores[2]);
    assert!((scores[3] - 0.5804).abs() < 1e-4, "{}", scores[3]);
    let best = (0..scores.len()).max_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(b.cmp(&a))).unwrap();
    assert_eq!(docs[best], GET_DEFAULT_INSTANCE);

    let ranked = &st.ranked.class_ctx[0].group;
    assert_eq!(ranked.chunks[0].chunk.scoring_text(), GET_DEFAULT_INSTANCE);
    assert_eq!(ranked.chunks.len(), 3);
}

#[test]
fn usage_ctx_keeps_four_distinct_usage_diffs_of_ten_references() {
    let st = staged(FIG1);
    let idx = synbc_core::resolver::index::BuiltinIndex::build(&st.prepared.snapshot);
    let usage = synbc_core::collect::collect_usage_ctx(&st.prepared.focal, &common::sample(FIG1).test, &st.prepared.snapshot, &idx)
        .unwrap();
    assert_eq!(usage.raw_references, 10);
    let texts: BTreeSet<&str> = usage.chunks.iter().map(|c| c.text.as_str()).collect();
    let expected: BTreeSet<&str> = [
        "- mFileSystem.mount(alluxioPath, ufsPath, MountOptions.defaults());\n+ mFileSystem.mount(alluxioPath, ufsPath, MountPOptions.getDefaultInstance());",
        "- MountOptions options = MountOptions.defaults().setReadOnly(true);\n+ MountPOptions options = MountPOptions.newBuilder().setReadOnly(true).build();",
        "- @Override public void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountOptions options) {\n+ @Override public void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountPOptions options) {",
        "- fs.mount(p, ufs, MountOptions.defaults());\n+ fs.mount(p, ufs, MountPOptions.getDefaultInstance());",
    ]
    .into_iter()
    .collect();
    assert_eq!(usage.chunks.len(), 4);
    assert_eq!(texts, expected);
    assert_eq!(st.bundle.usage_ctx, usage.chunks);
}

#[test]
fn env_ctx_shows_the_open_file_change() {
    let st = staged(FIG1);
    assert!(st.bundle.env_ctx_focal.iter().any(|c| c.text
        == "- return openFile(path, OpenFileOptions.defaults());\n+ return openFile(path, OpenFileOptions.getDefaultInstance());"));
    // The focal method's own header change is not repeated.
    assert!(st.bundle.env_ctx_focal.iter().all(|c| !c.text.contains("checkUri")));
    assert!(st.bundle.env_ctx_test.is_empty());
}

#[test]
fn queries_follow_the_obsolete_argument() {
    let st = staged(FIG1);
    assert_eq!(st.queries.param_op_queries, ["setOptions()", "setMountOptions()", "MountOptions.defaults()"]);
    assert!(st.queries.ret_op_queries.is_empty());
    assert_eq!(
        st.queries.obsolete_stmts,
        "MountOptions mountOptions = MountOptions.defaults(); mFileSystem.mount(alluxioPath, ufsPath, mountOptions);"
    );
}

#[test]
fn prompt_leads_the_class_section_with_the_top_chunk() {
    let st = staged(FIG1);
    let text = st.prompt.render();
    let section = text.split("### Defined in class MountPOptions\n").nth(1).expect("class section");
    let first_decl = section.lines().skip_while(|l| *l != "```java").nth(1).unwrap();
    assert_eq!(first_decl, GET_DEFAULT_INSTANCE);
    assert!(text.contains("## Focal method diff\n```diff\n"));
}

#[test]
fn return_change_sample_mines_accesses_and_grows_backwards() {
    let st = staged(CATALOG);
    assert_eq!(st.prepared.focal.kinds, SynBCKind { param: false, ret: true, norm: false });
    assert_eq!(st.queries.ret_op_queries, ["size()", "get()"]);
    assert!(st.queries.param_op_queries.is_empty());
    assert_eq!(
        st.bundle.usage_ctx.iter().map(|c| c.text.as_str()).collect::<Vec<_>>(),
        ["- List<String> names = catalog.names();\n+ NameList names = catalog.names();\n- return String.join(\", \", names);\n+ return names.join(\", \");"]
    );
    let top: Vec<&str> = st.ranked.class_ctx[0].group.chunks.iter().map(|c| c.chunk.scoring_text()).collect();
    assert_eq!(&top[..2], ["public int size();", "public String get(int index);"]);
}

#[test]
fn replayed_ground_truth_is_selected_and_scores_perfectly() {
    let tmp = tempfile::tempdir().unwrap();
    let started = Instant::now();
    seed_replay(tmp.path(), |s, _| fenced(s.ground_truth.as_deref().unwrap()));
    let sample = common::sample(FIG1);
    let config = common::replay_config(tmp.path(), tmp.path());
    let provider = ReplayProvider::new(tmp.path());
    let run = run_sample(&sample, &config, &provider, &Scorer::Lexical).unwrap();
    assert!(run.result.selected_method().contains("MountPOptions.getDefaultInstance()"));
    let score = score_run(&run, sample.ground_truth.as_deref().unwrap()).unwrap();
    assert!((score.code_bleu - 1.0).abs() < 1e-9);
    assert!((score.diff_bleu - 1.0).abs() < 1e-9);
    assert!(score.exact_match && score.syntax_ok);
    assert!(started.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn empty_bundle_renders_the_naive_prompt() {
    let st = staged(FIG1);
    let empty = RankedBundle::default();
    let prompt = assemble_prompt(&st.prepared.focal, &st.prepared.test_text, &empty, DEFAULT_TOKEN_CAP);
    let test = "@Test public void mount() throws Exception {\n    AlluxioURI alluxioPath = new AlluxioURI(\"/t\");\n    AlluxioURI ufsPath = new AlluxioURI(\"/u\");\n    MountOptions mountOptions = MountOptions.defaults();\n    mFileSystem.mount(alluxioPath, ufsPath, mountOptions);\n    assertTrue(mFileSystem.isMounted(alluxioPath));\n}";
    let diff = "@@ -1,4 +1,4 @@\n-@Override public void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountOptions options) {\n+@Override public void mount(AlluxioURI alluxioPath, AlluxioURI ufsPath, MountPOptions options) {\n     checkUri(alluxioPath);\n     mMountTable.put(alluxioPath.getPath(), ufsPath.getPath());\n }";
    let expected = format!(
        "{SYSTEM_TEXT}\n\n## Task\n{TASK_TEXT}\n\n## Original test\n```java\n{test}\n```\n\n## Focal method diff\n```diff\n{diff}\n```\n"
    );
    assert_eq!(prompt.render(), expected);

    let mut config = RunConfig { use_context: false, ..RunConfig::default() };
    config.k = 3;
    let naive = synbc_core::pipeline::stage_prompt(&common::sample(FIG1), &config, None, &Scorer::Lexical).unwrap();
    assert_eq!(naive.prompt.render(), expected);
}

#[test]
fn perfect_and_no_op_replays_over_the_fixture_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let perfect = tmp.path().join("perfect");
    seed_replay(&perfect, |s, _| fenced(s.ground_truth.as_deref().unwrap()));
    let (report, _) = evaluate_dataset(&common::manifest(), &common::replay_config(&perfect, tmp.path())).unwrap();
    assert_eq!(report.aggregates.samples, 2);
    assert_eq!(report.aggregates.accuracy_pct, 100.0);
    assert_eq!(report.aggregates.spr_pct, 100.0);
    assert!((report.aggregates.code_bleu - 1.0).abs() < 1e-9);

    let noop = tmp.path().join("noop");
    seed_replay(&noop, |_, st| fenced(&st.prepared.test_text));
    let (report, _) = evaluate_dataset(&common::manifest(), &common::replay_config(&noop, tmp.path())).unwrap();
    assert!(report.rows.iter().all(|r| r.error.is_none() && r.diff_bleu == 0.0 && !r.exact_match));
}

#[test]
fn repeated_evaluations_write_identical_reports() {
    let tmp = tempfile::tempdir().unwrap();
    let replay = tmp.path().join("replay");
    seed_replay(&replay, |s, _| fenced(s.ground_truth.as_deref().unwrap()));
    let manifest = common::manifest();
    let truths: Vec<(String, String)> =
        manifest.samples.iter().map(|s| (s.id.clone(), s.ground_truth.clone().unwrap())).collect();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let config = common::replay_config(&replay, &out);
        let (report, timings) = evaluate_dataset(&manifest, &config).unwrap();
        write_report(&report, &timings, &truths, &out).unwrap();
        let files: Vec<(String, Vec<u8>)> = ["scores.jsonl", "summary.json", "table.txt", "repairability_worksheet.csv"]
            .iter()
            .map(|f| (f.to_string(), std::fs::read(out.join(f)).unwrap()))
            .collect();
        outputs.push(files);
    }
    assert_eq!(outputs[0], outputs[1]);
}
