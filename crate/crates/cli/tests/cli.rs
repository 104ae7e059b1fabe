use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn synbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synbc"))
        .args(args)
        .env_remove("SYNBC_LLM_ENDPOINT")
        .env_remove("SYNBC_LLM_MODEL")
        .env_remove("SYNBC_LLM_KEY")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "exit {:?}\nstderr: {}", o.status.code(), String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_reports_the_fixture_kinds() {
    let m = fixtures().join("manifest.json");
    let out = stdout(&synbc(&["classify", "--manifest", path(&m), "--sample", "alluxio-mount"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("ParamSynBC"));
    let diff: Vec<&str> = lines.collect();
    assert!(diff.iter().any(|l| l.starts_with('-') && l.contains("MountOptions options")));
    assert!(diff.iter().any(|l| l.starts_with('+') && l.contains("MountPOptions options")));
    let out = stdout(&synbc(&["classify", "--manifest", path(&m), "--sample", "catalog-names"]));
    assert_eq!(out.lines().next(), Some("RetSynBC"));
}

/// Writes a one-method service and a test calling it; `variant` bits select
/// a parameter type change, a return type change, an added exception and a
/// renamed parameter.
fn synthetic(root: &Path, variant: usize) -> (Value, &'static str) {
    synthetic_with_rename(root, variant).0
}

/// As [`synthetic`], also reporting whether the parameter was renamed.
fn synthetic_with_rename(root: &Path, variant: usize) -> ((Value, &'static str), bool) {
    let (param, ret, throws, rename) = (variant & 1 != 0, variant & 2 != 0, variant & 4 != 0, variant & 8 != 0);
    let header = |post: bool| {
        let ty = if post && param { "long" } else { "int" };
        let rt = if post && ret { "Integer" } else { "int" };
        let name = if post && rename { "amount" } else { "n" };
        let th = if post && throws { " throws java.io.IOException" } else { "" };
        // Every other sample spells the same signature with extra spaces.
        let gap = if variant.is_multiple_of(2) && variant >= 16 { "  " } else { " " };
        format!("public{gap}{rt} twice({ty}{gap}{name}){th}")
    };
    let id = format!("syn-{variant:02}");
    for (dir, post) in [("pre", false), ("post", true)] {
        let d = root.join(&id).join(dir);
        std::fs::create_dir_all(&d).unwrap();
        let body = if post && rename { "return (int) amount * 2;" } else { "return (int) n * 2;" };
        std::fs::write(d.join("Calc.java"), format!("class Calc {{\n    {} {{\n        {body}\n    }}\n}}\n", header(post))).unwrap();
        std::fs::write(
            d.join("CalcTest.java"),
            "class CalcTest {\n    void doubles() {\n        assertEquals(4, new Calc().twice(2));\n    }\n}\n",
        )
        .unwrap();
    }
    let loc = json!({"file": "Calc.java", "classes": ["Calc"], "method": "twice"});
    let entry = json!({
        "id": id,
        "pre": format!("{id}/pre"),
        "post": format!("{id}/post"),
        "focal_pre": loc,
        "focal_post": loc,
        "test": {"file": "CalcTest.java", "classes": ["CalcTest"], "method": "doubles"},
    });
    // Parameter names are not part of the signature.
    let label = match (param, ret, throws) {
        (true, true, _) => "ParamSynBC+RetSynBC",
        (true, false, _) => "ParamSynBC",
        (false, true, _) => "RetSynBC",
        (false, false, true) => "NormSynBC",
        (false, false, false) => "none",
    };
    ((entry, label), rename)
}

#[test]
fn classify_matches_labels_on_synthetic_samples() {
    let tmp = tempfile::tempdir().unwrap();
    let samples: Vec<_> = (0..20).map(|v| synthetic_with_rename(tmp.path(), v)).collect();
    let entries: Vec<&Value> = samples.iter().map(|((e, _), _)| e).collect();
    let m = tmp.path().join("manifest.json");
    std::fs::write(&m, serde_json::to_string_pretty(&entries).unwrap()).unwrap();
    for ((entry, label), renamed) in &samples {
        let id = entry["id"].as_str().unwrap();
        let out = stdout(&synbc(&["classify", "--manifest", path(&m), "--sample", id]));
        assert_eq!(out.lines().next(), Some(*label), "{id}");
        if *label == "none" && !renamed {
            assert_eq!(out.lines().count(), 1, "{id}: unchanged signature prints no diff");
        }
    }
}

#[test]
fn rejected_samples_exit_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let (mut entry, _) = synthetic(tmp.path(), 1);
    entry["test"]["method"] = json!("missing");
    let m = tmp.path().join("manifest.json");
    std::fs::write(&m, serde_json::to_string(&[entry]).unwrap()).unwrap();
    let o = synbc(&["classify", "--manifest", path(&m)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("incomplete test"));

    let o = synbc(&["eval", "--manifest", path(&fixtures().join("manifest.json"))]);
    assert_eq!(o.status.code(), Some(2), "replay mode without a replay directory is invalid input");
    assert!(String::from_utf8_lossy(&o.stderr).contains("replay directory"));
}

#[test]
fn prompt_output_is_stable_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let m = fixtures().join("manifest.json");
    let mut prompts = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        stdout(&synbc(&["prompt", "--manifest", path(&m), "--sample", "alluxio-mount", "--out", path(&out)]));
        let dir = out.join("alluxio-mount");
        for f in ["bundle.json", "queries.json", "ranked.json", "prompt.json"] {
            assert!(dir.join(f).is_file(), "{f}");
        }
        prompts.push(std::fs::read(dir.join("prompt.txt")).unwrap());
    }
    assert_eq!(prompts[0], prompts[1]);
    let text = String::from_utf8(prompts[0].clone()).unwrap();
    assert!(text.contains("getDefaultInstance"));

    let naive = tmp.path().join("naive");
    stdout(&synbc(&["prompt", "--manifest", path(&m), "--sample", "alluxio-mount", "--no-context", "--out", path(&naive)]));
    let naive_text = std::fs::read_to_string(naive.join("alluxio-mount/prompt.txt")).unwrap();
    assert!(!naive_text.contains("getDefaultInstance"));
    assert!(naive_text.len() < text.len());
}

#[test]
fn config_file_settings_yield_to_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let m = fixtures().join("manifest.json");
    let from_file = tmp.path().join("from-file");
    let cfg = tmp.path().join("run.toml");
    std::fs::write(&cfg, format!("out = {:?}\nk = 1\n", path(&from_file))).unwrap();
    stdout(&synbc(&["collect", "--manifest", path(&m), "--sample", "catalog-names", "--config", path(&cfg)]));
    assert!(from_file.join("catalog-names/bundle.json").is_file());

    let from_flag = tmp.path().join("from-flag");
    stdout(&synbc(&["collect", "--manifest", path(&m), "--sample", "catalog-names", "--config", path(&cfg), "--out", path(&from_flag)]));
    assert!(from_flag.join("catalog-names/bundle.json").is_file());

    let ranked = |k: Option<&str>| {
        let out = tmp.path().join(format!("k{}", k.unwrap_or("file")));
        let mut args = vec!["rerank", "--manifest", path(&m), "--sample", "alluxio-mount", "--config", path(&cfg), "--out", path(&out)];
        if let Some(k) = k {
            args.extend(["--k", k]);
        }
        stdout(&synbc(&args));
        let v: Value = serde_json::from_str(&std::fs::read_to_string(out.join("alluxio-mount/ranked.json")).unwrap()).unwrap();
        v["usage_ctx"]["chunks"].as_array().unwrap().len()
    };
    assert_eq!(ranked(None), 1);
    assert_eq!(ranked(Some("3")), 3);
}

fn seed(m: &Path, replay: &Path, source: &str) -> Vec<String> {
    let out = stdout(&synbc(&["replay-seed", "--manifest", path(m), "--replay-dir", path(replay), "--source", source]));
    out.lines().map(String::from).collect()
}

#[test]
fn repair_with_seeded_replies_returns_the_ground_truth() {
    let tmp = tempfile::tempdir().unwrap();
    let m = fixtures().join("manifest.json");
    let replay = tmp.path().join("replay");
    let seeded = seed(&m, &replay, "ground-truth");
    assert_eq!(seeded.len(), 2);
    assert!(seeded[0].starts_with("alluxio-mount ") && seeded[1].starts_with("catalog-names "));

    let out = tmp.path().join("out");
    let printed = stdout(&synbc(&[
        "repair", "--manifest", path(&m), "--sample", "alluxio-mount", "--replay-dir", path(&replay), "--out", path(&out),
    ]));
    let truth = std::fs::read_to_string(fixtures().join("fig1/ground_truth.java")).unwrap();
    assert_eq!(printed.trim(), truth.trim());
    assert_eq!(std::fs::read_to_string(out.join("alluxio-mount/repaired.java")).unwrap().trim(), truth.trim());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out.join("alluxio-mount/repair.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["candidates"].as_array().unwrap().len(), 3);
}

fn table_row(table: &str) -> Vec<String> {
    table.lines().nth(1).unwrap().split_whitespace().map(String::from).collect()
}

#[test]
fn eval_scores_perfect_and_no_op_replies() {
    let tmp = tempfile::tempdir().unwrap();
    let m = fixtures().join("manifest.json");

    let perfect = tmp.path().join("perfect");
    seed(&m, &perfect, "ground-truth");
    let out = tmp.path().join("eval-perfect");
    let table = stdout(&synbc(&["eval", "--manifest", path(&m), "--replay-dir", path(&perfect), "--out", path(&out)]));
    assert_eq!(table_row(&table), ["with-context", "100.0", "100.0", "100.0%", "100.0%"]);
    for f in ["scores.jsonl", "summary.json", "table.txt", "repairability_worksheet.csv", "timings.jsonl"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    assert_eq!(std::fs::read_to_string(out.join("table.txt")).unwrap(), table);

    let noop = tmp.path().join("noop");
    seed(&m, &noop, "original");
    let table = stdout(&synbc(&["eval", "--manifest", path(&m), "--replay-dir", path(&noop), "--out", path(&tmp.path().join("eval-noop"))]));
    let row = table_row(&table);
    assert_eq!((row[2].as_str(), row[3].as_str()), ("0.0", "0.0%"));
}
