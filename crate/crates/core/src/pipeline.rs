//! End-to-end sample runs and dataset evaluation.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::collect::{collect_all, TROCtxBundle};
use crate::config::{ConfigEcho, RunConfig};
use crate::dataset::{LoadedManifest, Rejection, RepairSample};
use crate::error::{Error, Result};
use crate::metrics::{code_bleu, diff_bleu, exact_match, CodeBleu};
use crate::prompt::{assemble_prompt, RepairPrompt};
use crate::provider::LlmProvider;
use crate::query::{build_queries, QuerySet};
use crate::repair::{repair, RepairResult, SelectionMode};
use crate::rerank::{select_troctx, RankedBundle, Scorer};
use crate::resolver::index::BuiltinIndex;
use crate::resolver::lsp::{LspResolver, DEFAULT_TIMEOUT};
use crate::resolver::{BackendKind, SymbolResolver};
use crate::signature::{parse_method, FocalChange};
use crate::snapshot::{RepoSnapshot, Version};

/// Inputs of one sample after loading its snapshot.
pub struct Prepared {
    pub snapshot: RepoSnapshot,
    pub focal: FocalChange,
    /// Declaration text of the obsolete test.
    pub test_text: String,
    pub test_name: String,
}

pub fn prepare(sample: &RepairSample) -> Result<Prepared> {
    let snapshot = RepoSnapshot::load(&sample.pre_root, &sample.post_root)?;
    let focal = FocalChange::from_snapshot(&snapshot, &sample.focal_pre, &sample.focal_post)?;
    let test = parse_method(snapshot.file(Version::Pre, &sample.test.file)?, &sample.test)?;
    Ok(Prepared {
        focal,
        test_name: test.signature.name.clone(),
        test_text: test.declaration,
        snapshot,
    })
}

pub fn build_resolver(snapshot: &RepoSnapshot, config: &RunConfig) -> Box<dyn SymbolResolver> {
    match config.backend {
        BackendKind::Builtin => Box::new(BuiltinIndex::build(snapshot)),
        BackendKind::Lsp => Box::new(LspResolver::new(snapshot.clone(), config.lsp_command.clone(), DEFAULT_TIMEOUT)),
    }
}

/// Wall-clock milliseconds per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub load_ms: f64,
    pub collect_ms: f64,
    pub query_ms: f64,
    pub rerank_ms: f64,
    pub prompt_ms: f64,
    pub repair_ms: f64,
    pub total_ms: f64,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

/// Every intermediate artifact of one sample run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleRun {
    pub id: String,
    pub focal: FocalChange,
    pub test_text: String,
    pub bundle: TROCtxBundle,
    pub queries: QuerySet,
    pub ranked: RankedBundle,
    pub prompt: RepairPrompt,
    pub result: RepairResult,
    pub timings: Timings,
}

/// Runs the stages up to the prompt.
pub struct Staged {
    pub prepared: Prepared,
    pub bundle: TROCtxBundle,
    pub queries: QuerySet,
    pub ranked: RankedBundle,
    pub prompt: RepairPrompt,
    pub timings: Timings,
}

pub fn stage_prompt(
    sample: &RepairSample,
    config: &RunConfig,
    provider: Option<&dyn LlmProvider>,
    scorer: &Scorer,
) -> Result<Staged> {
    let start = Instant::now();
    let mut timings = Timings::default();
    let prepared = prepare(sample)?;
    timings.load_ms = ms(start);

    let (bundle, queries, ranked) = if config.use_context {
        let t = Instant::now();
        let resolver = build_resolver(&prepared.snapshot, config);
        let bundle = collect_all(&prepared.focal, &sample.test, &prepared.snapshot, resolver.as_ref())?;
        timings.collect_ms = ms(t);

        let t = Instant::now();
        let queries = build_queries(&prepared.focal, &prepared.test_text, provider)?;
        timings.query_ms = ms(t);

        let t = Instant::now();
        let ranked = select_troctx(&bundle, &queries, scorer, config.k);
        timings.rerank_ms = ms(t);
        (bundle, queries, ranked)
    } else {
        (TROCtxBundle::default(), QuerySet::default(), RankedBundle { k: config.k, ..Default::default() })
    };

    let t = Instant::now();
    let prompt = assemble_prompt(&prepared.focal, &prepared.test_text, &ranked, config.token_cap);
    timings.prompt_ms = ms(t);
    timings.total_ms = ms(start);
    Ok(Staged { prepared, bundle, queries, ranked, prompt, timings })
}

pub fn run_sample(
    sample: &RepairSample,
    config: &RunConfig,
    provider: &dyn LlmProvider,
    scorer: &Scorer,
) -> Result<SampleRun> {
    let start = Instant::now();
    let staged = stage_prompt(sample, config, Some(provider), scorer)?;
    let mut timings = staged.timings;
    let t = Instant::now();
    let mode = match &sample.ground_truth {
        Some(g) => SelectionMode::Eval { ground_truth: g },
        None => SelectionMode::Repair { original: &staged.prepared.test_text },
    };
    let result = repair(
        &staged.prompt,
        provider,
        config.attempts,
        config.temperature,
        Some(&staged.prepared.test_name),
        &mode,
    )?;
    timings.repair_ms = ms(t);
    timings.total_ms = ms(start);
    Ok(SampleRun {
        id: sample.id.clone(),
        focal: staged.prepared.focal,
        test_text: staged.prepared.test_text,
        bundle: staged.bundle,
        queries: staged.queries,
        ranked: staged.ranked,
        prompt: staged.prompt,
        result,
        timings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleScore {
    pub id: String,
    pub kinds: String,
    pub code_bleu: f64,
    pub code_bleu_components: Option<CodeBleu>,
    pub diff_bleu: f64,
    pub exact_match: bool,
    /// Byte equality after trimming, without canonicalization.
    pub raw_exact_match: bool,
    pub syntax_ok: bool,
    pub prompt_token_count: usize,
    pub selection_reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SampleScore {
    fn failed(id: &str, error: String) -> Self {
        SampleScore {
            id: id.to_string(),
            kinds: String::new(),
            code_bleu: 0.0,
            code_bleu_components: None,
            diff_bleu: 0.0,
            exact_match: false,
            raw_exact_match: false,
            syntax_ok: false,
            prompt_token_count: 0,
            selection_reason: String::new(),
            candidate: None,
            error: Some(error),
        }
    }
}

/// Metrics of a selected candidate against the ground truth.
pub fn score_run(run: &SampleRun, ground_truth: &str) -> Result<SampleScore> {
    let candidate = run.result.selected_method();
    let canon = |t: &str| crate::metrics::canonical_lines(t).join("\n");
    let cb = code_bleu(&canon(candidate), &canon(ground_truth))?;
    Ok(SampleScore {
        id: run.id.clone(),
        kinds: run.focal.kinds.to_string(),
        code_bleu: cb.total,
        code_bleu_components: Some(cb),
        diff_bleu: diff_bleu(&run.test_text, candidate, ground_truth)?,
        exact_match: exact_match(candidate, ground_truth),
        raw_exact_match: candidate.trim() == ground_truth.trim(),
        syntax_ok: run.result.candidates[run.result.selected].syntax_ok,
        prompt_token_count: run.prompt.token_count(),
        selection_reason: run.result.selection_reason.clone(),
        candidate: Some(candidate.to_string()),
        error: None,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub samples: usize,
    pub failed: usize,
    pub code_bleu: f64,
    pub diff_bleu: f64,
    pub accuracy_pct: f64,
    pub raw_accuracy_pct: f64,
    pub spr_pct: f64,
    pub mean_prompt_tokens: f64,
}

impl Aggregates {
    /// Arithmetic means over all rows; failed rows count as zeros.
    pub fn from_rows(rows: &[SampleScore]) -> Self {
        let n = rows.len();
        if n == 0 {
            return Aggregates::default();
        }
        let mean = |f: &dyn Fn(&SampleScore) -> f64| rows.iter().map(f).sum::<f64>() / n as f64;
        let pct = |f: &dyn Fn(&SampleScore) -> bool| 100.0 * rows.iter().filter(|r| f(r)).count() as f64 / n as f64;
        Aggregates {
            samples: n,
            failed: rows.iter().filter(|r| r.error.is_some()).count(),
            code_bleu: mean(&|r| r.code_bleu),
            diff_bleu: mean(&|r| r.diff_bleu),
            accuracy_pct: pct(&|r| r.exact_match),
            raw_accuracy_pct: pct(&|r| r.raw_exact_match),
            spr_pct: pct(&|r| r.syntax_ok),
            mean_prompt_tokens: mean(&|r| r.prompt_token_count as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub config: ConfigEcho,
    pub aggregates: Aggregates,
    pub rows: Vec<SampleScore>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rejected: Vec<Rejection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub id: String,
    #[serde(flatten)]
    pub timings: Timings,
}

fn evaluate_one(
    sample: &RepairSample,
    config: &RunConfig,
    provider: &dyn LlmProvider,
    scorer: &Scorer,
) -> (SampleScore, TimingRow) {
    let outcome = (|| {
        let gt = sample
            .ground_truth
            .as_deref()
            .ok_or_else(|| Error::Validation { id: sample.id.clone(), rule: "missing ground truth".into() })?;
        let run = run_sample(sample, config, provider, scorer)?;
        let score = score_run(&run, gt)?;
        Ok::<_, Error>((score, run.timings))
    })();
    match outcome {
        Ok((score, timings)) => (score, TimingRow { id: sample.id.clone(), timings }),
        Err(e) => {
            tracing::error!(id = %sample.id, error = %e, "sample failed");
            (
                SampleScore::failed(&sample.id, e.to_string()),
                TimingRow { id: sample.id.clone(), timings: Timings::default() },
            )
        }
    }
}

/// Runs every loaded sample; per-sample failures become error rows.
pub fn evaluate_dataset(manifest: &LoadedManifest, config: &RunConfig) -> Result<(EvaluationReport, Vec<TimingRow>)> {
    let provider = config.build_provider()?;
    let scorer = config.build_scorer();
    let jobs = config.jobs.unwrap_or_else(rayon::current_num_threads).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results: Vec<(SampleScore, TimingRow)> = pool.install(|| {
        manifest
            .samples
            .par_iter()
            .map(|s| evaluate_one(s, config, provider.as_ref(), &scorer))
            .collect()
    });
    let (rows, timings): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let report = EvaluationReport {
        config: config.echo(),
        aggregates: Aggregates::from_rows(&rows),
        rows,
        rejected: manifest.rejected.clone(),
    };
    Ok((report, timings))
}

/// Columns: approach, CodeBLEU, DiffBLEU, Accuracy, SPR.
pub fn render_table(report: &EvaluationReport) -> String {
    let a = &report.aggregates;
    let approach = if report.config.use_context { "with-context" } else { "naive" };
    let mut s = format!(
        "{:<14}{:>10}{:>10}{:>10}{:>8}\n",
        "Approach", "CodeBLEU", "DiffBLEU", "Accuracy", "SPR"
    );
    s.push_str(&format!(
        "{:<14}{:>10.1}{:>10.1}{:>9.1}%{:>7.1}%\n",
        approach,
        a.code_bleu * 100.0,
        a.diff_bleu * 100.0,
        a.accuracy_pct,
        a.spr_pct
    ));
    s.push_str(&format!("samples: {}  failed: {}  rejected: {}\n", a.samples, a.failed, report.rejected.len()));
    s
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Writes `scores.jsonl`, `summary.json`, `table.txt`,
/// `repairability_worksheet.csv` and `timings.jsonl` into `dir`.
pub fn write_report(report: &EvaluationReport, timings: &[TimingRow], ground_truths: &[(String, String)], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    let mut rows = String::new();
    for r in &report.rows {
        rows.push_str(&serde_json::to_string(r)?);
        rows.push('\n');
    }
    write(&dir.join("scores.jsonl"), &rows)?;
    write(&dir.join("summary.json"), &(serde_json::to_string_pretty(report)? + "\n"))?;
    write(&dir.join("table.txt"), &render_table(report))?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::io("repairability worksheet", std::io::Error::other(e));
    csv.write_record(["sample_id", "candidate", "ground_truth", "verdict"]).map_err(io)?;
    for r in &report.rows {
        let gt = ground_truths.iter().find(|(id, _)| *id == r.id).map_or("", |(_, g)| g.as_str());
        csv.write_record([r.id.as_str(), r.candidate.as_deref().unwrap_or(""), gt, ""])
            .map_err(io)?;
    }
    let bytes = csv.into_inner().map_err(|e| Error::io("repairability worksheet", std::io::Error::other(e.to_string())))?;
    write(&dir.join("repairability_worksheet.csv"), &String::from_utf8_lossy(&bytes))?;

    let mut t = String::new();
    for row in timings {
        t.push_str(&serde_json::to_string(row)?);
        t.push('\n');
    }
    write(&dir.join("timings.jsonl"), &t)
}
