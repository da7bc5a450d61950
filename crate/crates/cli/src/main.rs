//! `geo-stability`: stability analytics for repeated-prompt AI search logs.
//!
//! Exit codes: 0 success, 1 completed with warnings, 2 fatal error.

mod commands;
mod config;
mod plan;

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "geo-stability",
    version,
    about = "Stability analytics for repeated-prompt AI search logs"
)]
pub struct Cli {
    /// TOML config file; every flag has a key of the same name (flags win).
    #[arg(long, global = true, env = "GEO_STABILITY_CONFIG", value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output directory for tables, figures and datasets [default: out].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Master seed; every random draw is derived from it [default: 0].
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and filter logs; write the filtered dataset and coverage table.
    Ingest(DataArgs),
    /// Pairwise Jaccard and RBO over consecutive-day or within-24h pairs.
    Similarity(SimilarityArgs),
    /// Citation concentration (Gini) per campaign and engine.
    Gini(DataArgs),
    /// Standard-error curves over run count or observation window length.
    Converge(ConvergeArgs),
    /// Brand mentions per record and detection rates.
    Detect(LexiconDataArgs),
    /// Campaign detection rates against the qualification threshold.
    Qualify(LexiconDataArgs),
    /// Run a collection plan against HTTP engine endpoints.
    Collect(CollectArgs),
    /// Generate a synthetic dataset with the seeded engine simulator.
    Simulate(SimulateArgs),
    /// Every table and figure for a temporal and a simultaneous dataset.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct FilterArgs {
    /// First day kept (inclusive).
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub start: Option<NaiveDate>,
    /// Last day kept (inclusive).
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub end: Option<NaiveDate>,
    /// Drop every record on this day (repeatable).
    #[arg(long, value_name = "YYYY-MM-DD")]
    pub exclude_date: Vec<NaiveDate>,
    /// Drop citations to this host (repeatable) [default: images.openai.com].
    #[arg(long, value_name = "HOST")]
    pub block_domain: Vec<String>,
    /// Drop records of this engine (repeatable) [default: google-aio].
    #[arg(long, value_name = "ENGINE")]
    pub exclude_engine: Vec<String>,
    /// Keep every engine, including the default exclusions.
    #[arg(long)]
    pub keep_all_engines: bool,
    /// Drop records of this campaign (repeatable).
    #[arg(long, value_name = "CAMPAIGN")]
    pub exclude_campaign: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Line-delimited JSON response logs.
    #[arg(required = true, value_name = "LOG")]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub filters: FilterArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct LexiconArgs {
    /// Brand lexicon JSON: {"Campaign": [{"canonical": ..., "patterns": [...]}]}.
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    /// Minimum campaign detection rate for brand analyses [default: 0.7].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Logs used to compute qualification instead of the analysed inputs.
    #[arg(long, value_name = "LOG")]
    pub qualify_on: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LexiconDataArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairMode {
    /// Consecutive-day pairs.
    Temporal,
    /// Pairs of runs at most 24 hours apart.
    #[value(alias = "simul")]
    Simultaneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Source,
    Brand,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MetricArgs {
    /// RBO persistence p [default: 0.9].
    #[arg(long)]
    pub persistence: Option<f64>,
    /// Largest day gap still paired in temporal mode [default: 1].
    #[arg(long)]
    pub max_gap_days: Option<u32>,
    /// Table formats, comma separated: csv, json, md, svg [default: csv,md,svg].
    #[arg(long, value_delimiter = ',')]
    pub formats: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SimilarityArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum)]
    pub mode: PairMode,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub metric: MetricArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvergeMode {
    /// Subsample n of the first N runs per engine-prompt group.
    Runs,
    /// Rolling d-day windows over daily observations.
    Window,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ConvergenceArgs {
    /// Resamples per subsample size [default: 2000].
    #[arg(long)]
    pub resamples: Option<usize>,
    /// Runs N used per engine-prompt group [default: 10].
    #[arg(long)]
    pub runs_per_group: Option<usize>,
    /// Window lengths, e.g. "1-40" or "7,14,28" [default: all].
    #[arg(long, value_name = "LIST")]
    pub windows: Option<String>,
    /// Windows may not span days without observations.
    #[arg(long)]
    pub strict_calendar: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_enum)]
    pub mode: ConvergeMode,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub convergence: ConvergenceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CollectArgs {
    /// Plan TOML with [plan] and [[engines]] (name, url) tables.
    #[arg(long, value_name = "FILE")]
    pub plan: PathBuf,
    /// Output log name inside the output directory.
    #[arg(long, default_value = "collected.jsonl")]
    pub output: String,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Simulation TOML with [plan], engines and [simulator] tables.
    #[arg(long, value_name = "FILE")]
    pub spec: PathBuf,
    /// Output log name inside the output directory.
    #[arg(long, default_value = "simulated.jsonl")]
    pub output: String,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Day-by-day logs (consecutive-day similarity, Gini, window curves).
    #[arg(long, required = true, num_args = 1.., value_name = "LOG")]
    pub temporal: Vec<PathBuf>,
    /// Repeated-run logs (within-24h similarity, run-count curves).
    #[arg(long, num_args = 1.., value_name = "LOG")]
    pub simultaneous: Vec<PathBuf>,
    #[command(flatten)]
    pub filters: FilterArgs,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[command(flatten)]
    pub convergence: ConvergenceArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(warnings) if warnings.is_empty() => ExitCode::SUCCESS,
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
