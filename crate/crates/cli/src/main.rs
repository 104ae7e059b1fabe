//! `synbc`: repair tests broken by method signature changes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use synbc_core::config::{ProviderMode, RunConfig};
use synbc_core::dataset::{load_manifest, LoadedManifest, RepairSample};
use synbc_core::pipeline::{evaluate_dataset, prepare, run_sample, stage_prompt, write_report, Staged};
use synbc_core::provider::{replay_key, LlmProvider};
use synbc_core::resolver::BackendKind;
use synbc_core::rerank::ScorerKind;
use synbc_core::{Error, Result};

#[derive(Parser)]
#[command(name = "synbc", version, about = "Repair Java tests broken by method signature changes")]
struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the signature change kinds of a sample.
    Classify(SampleArgs),
    /// Collect repair contexts and write them to the output directory.
    Collect(SampleArgs),
    /// Collect, build queries and rerank.
    Rerank(SampleArgs),
    /// Write the rendered repair prompt.
    Prompt(SampleArgs),
    /// Generate candidates and select a repaired test.
    Repair(SampleArgs),
    /// Evaluate every sample of a manifest.
    Eval(ManifestArgs),
    /// Write replay responses for the repair prompts of a manifest.
    ReplaySeed(SeedArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Builtin,
    Lsp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScorerArg {
    Lexical,
    Remote,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Live,
    Replay,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedSource {
    /// Reply with the sample's ground truth.
    GroundTruth,
    /// Reply with the obsolete test unchanged.
    Original,
}

#[derive(Args, Clone, Default)]
struct ConfigArgs {
    /// TOML file with run settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    /// Language server command line, whitespace separated.
    #[arg(long)]
    lsp_command: Option<String>,
    #[arg(long, value_enum)]
    scorer: Option<ScorerArg>,
    #[arg(long)]
    scorer_endpoint: Option<String>,
    #[arg(long, value_enum)]
    provider: Option<ProviderArg>,
    #[arg(long)]
    replay_dir: Option<PathBuf>,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    attempts: Option<usize>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    token_cap: Option<usize>,
    /// Render prompts without repository contexts.
    #[arg(long)]
    no_context: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct ManifestArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Sample id; may be omitted when the manifest holds one sample.
    #[arg(long)]
    sample: Option<String>,
    #[command(flatten)]
    config: ConfigArgs,
}

#[derive(Args)]
struct SeedArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long, value_enum, default_value = "ground-truth")]
    source: SeedSource,
    #[command(flatten)]
    config: ConfigArgs,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
                toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(b) = self.backend {
            c.backend = match b {
                Backend::Builtin => BackendKind::Builtin,
                Backend::Lsp => BackendKind::Lsp,
            };
        }
        if let Some(cmd) = &self.lsp_command {
            c.lsp_command = cmd.split_whitespace().map(String::from).collect();
        }
        if let Some(s) = self.scorer {
            c.scorer = match s {
                ScorerArg::Lexical => ScorerKind::Lexical,
                ScorerArg::Remote => ScorerKind::Remote,
            };
        }
        if let Some(p) = self.provider {
            c.provider = match p {
                ProviderArg::Live => ProviderMode::Live,
                ProviderArg::Replay => ProviderMode::Replay,
            };
        }
        set(&mut c.scorer_endpoint, &self.scorer_endpoint);
        set(&mut c.replay_dir, &self.replay_dir);
        set(&mut c.endpoint, &self.endpoint);
        set(&mut c.model, &self.model);
        set(&mut c.jobs, &self.jobs);
        c.k = self.k.unwrap_or(c.k);
        c.attempts = self.attempts.unwrap_or(c.attempts);
        c.temperature = self.temperature.unwrap_or(c.temperature);
        c.token_cap = self.token_cap.unwrap_or(c.token_cap);
        c.out = self.out.clone().unwrap_or(c.out);
        if self.no_context {
            c.use_context = false;
        }
        Ok(c.with_env())
    }
}

fn set<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
    if flag.is_some() {
        slot.clone_from(flag);
    }
}

fn pick_sample(manifest: &LoadedManifest, id: Option<&str>) -> Result<RepairSample> {
    match id {
        Some(id) => {
            if let Some(r) = manifest.rejected.iter().find(|r| r.id == id) {
                return Err(Error::Validation { id: r.id.clone(), rule: r.rule.clone() });
            }
            manifest
                .samples
                .iter()
                .find(|s| s.id == id)
                .cloned()
                .ok_or_else(|| Error::Config(format!("sample {id} is not in the manifest")))
        }
        None => match (manifest.samples.as_slice(), manifest.rejected.as_slice()) {
            ([s], []) => Ok(s.clone()),
            ([], [r]) => Err(Error::Validation { id: r.id.clone(), rule: r.rule.clone() }),
            _ => Err(Error::Config("the manifest holds several samples; pass --sample".into())),
        },
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    write_file(path, &(serde_json::to_string_pretty(value)? + "\n"))
}

/// Provider for statement queries in the stages before repair; absent when
/// the configuration cannot build one.
fn optional_provider(config: &RunConfig) -> Option<Box<dyn LlmProvider>> {
    config.build_provider().ok()
}

fn staged(sample: &RepairSample, config: &RunConfig) -> Result<Staged> {
    let provider = optional_provider(config);
    stage_prompt(sample, config, provider.as_deref(), &config.build_scorer())
}

enum Stage {
    Collect,
    Rerank,
    Prompt,
}

fn cmd_stage(args: &SampleArgs, stage: Stage) -> Result<()> {
    let config = args.config.resolve()?;
    let sample = pick_sample(&load_manifest(&args.manifest)?, args.sample.as_deref())?;
    let s = staged(&sample, &config)?;
    let dir = config.out.join(&sample.id);
    write_json(&dir.join("bundle.json"), &s.bundle)?;
    if matches!(stage, Stage::Rerank | Stage::Prompt) {
        write_json(&dir.join("queries.json"), &s.queries)?;
        write_json(&dir.join("ranked.json"), &s.ranked)?;
    }
    if matches!(stage, Stage::Prompt) {
        write_json(&dir.join("prompt.json"), &s.prompt)?;
        write_file(&dir.join("prompt.txt"), &s.prompt.render())?;
    }
    println!("{}", dir.display());
    Ok(())
}

fn cmd_classify(args: &SampleArgs) -> Result<()> {
    let sample = pick_sample(&load_manifest(&args.manifest)?, args.sample.as_deref())?;
    let prepared = prepare(&sample)?;
    println!("{}", prepared.focal.kinds);
    print!("{}", prepared.focal.focal_diff(0).render_unified());
    Ok(())
}

fn cmd_repair(args: &SampleArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let sample = pick_sample(&load_manifest(&args.manifest)?, args.sample.as_deref())?;
    let provider = config.build_provider()?;
    let run = run_sample(&sample, &config, provider.as_ref(), &config.build_scorer())?;
    let dir = config.out.join(&sample.id);
    write_json(&dir.join("repair.json"), &json!({
        "id": run.id,
        "kinds": run.focal.kinds.to_string(),
        "result": run.result,
    }))?;
    let method = run.result.selected_method();
    write_file(&dir.join("repaired.java"), &format!("{method}\n"))?;
    println!("{method}");
    Ok(())
}

fn cmd_eval(args: &ManifestArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let manifest = load_manifest(&args.manifest)?;
    let (report, timings) = evaluate_dataset(&manifest, &config)?;
    let truths: Vec<(String, String)> = manifest
        .samples
        .iter()
        .filter_map(|s| s.ground_truth.clone().map(|g| (s.id.clone(), g)))
        .collect();
    write_report(&report, &timings, &truths, &config.out)?;
    print!("{}", synbc_core::pipeline::render_table(&report));
    Ok(())
}

fn cmd_replay_seed(args: &SeedArgs) -> Result<()> {
    let config = args.config.resolve()?;
    let dir = config
        .replay_dir
        .clone()
        .ok_or_else(|| Error::Config("replay-seed requires --replay-dir".into()))?;
    let manifest = load_manifest(&args.manifest)?;
    for sample in &manifest.samples {
        let s = staged(sample, &config)?;
        let reply = match args.source {
            SeedSource::GroundTruth => sample
                .ground_truth
                .clone()
                .ok_or_else(|| Error::Validation { id: sample.id.clone(), rule: "missing ground truth".into() })?,
            SeedSource::Original => s.prepared.test_text.clone(),
        };
        let key = replay_key(&s.prompt.messages());
        write_file(&dir.join(format!("{key}.txt")), &format!("```java\n{}\n```\n", reply.trim_end()))?;
        println!("{} {key}", sample.id);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => tracing::Level::WARN,
        1 => tracing::Level::INFO,
        _ => tracing::Level::DEBUG,
    };
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_max_level(level)
        .init();

    let outcome = match &cli.command {
        Command::Classify(a) => cmd_classify(a),
        Command::Collect(a) => cmd_stage(a, Stage::Collect),
        Command::Rerank(a) => cmd_stage(a, Stage::Rerank),
        Command::Prompt(a) => cmd_stage(a, Stage::Prompt),
        Command::Repair(a) => cmd_repair(a),
        Command::Eval(a) => cmd_eval(a),
        Command::ReplaySeed(a) => cmd_replay_seed(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
