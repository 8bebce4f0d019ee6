//! Command-line definition and dispatch for the `embio` binary.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::commands;

#[derive(Debug, Parser)]
#[command(
    name = "embio",
    version,
    about = "Embedding-space pipeline: hypersphere sampling, domain-shift correction, identity dedup, verification metrics"
)]
pub struct Cli {
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Overwrite existing output files.
    #[arg(long, global = true)]
    pub force: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the mean-difference shift between two embedding files.
    EstimateShift(EstimateShiftArgs),
    /// Add a stored shift (optionally scaled) to every row of a file.
    ApplyShift(ApplyShiftArgs),
    /// Compute per-identity prototype embeddings from a labeled file.
    Prototype(PrototypeArgs),
    /// Rank identities by inter-identity similarity and keep the most
    /// distinct k.
    FilterIds(FilterIdsArgs),
    /// Build and execute deterministic per-identity sampling plans.
    Sample(SampleArgs),
    /// Fold-based verification accuracy over a pairs file.
    EvalVerify(EvalVerifyArgs),
    /// TAR at a fixed FAR operating point over a pairs file.
    EvalTar(EvalTarArgs),
    /// Generate labeled synthetic clusters on the unit sphere.
    SynthClusters(SynthClustersArgs),
}

#[derive(Debug, clap::Args)]
pub struct EstimateShiftArgs {
    /// Target-population EMB1 file (the distribution to move toward).
    #[arg(long)]
    pub target: PathBuf,
    /// Source-population EMB1 file (the distribution to correct).
    #[arg(long)]
    pub source: PathBuf,
    /// Output shift file (1 row); a .json sidecar records provenance.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct ApplyShiftArgs {
    /// Input EMB1 file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Shift file written by estimate-shift.
    #[arg(long)]
    pub delta: PathBuf,
    /// Scale factor for the shift (default: shift_strength config key).
    #[arg(long)]
    pub strength: Option<f64>,
    /// Run-config TOML file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output EMB1 file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct PrototypeArgs {
    /// Input EMB1 file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// JSONL label manifest for the input file.
    #[arg(long)]
    pub labels: PathBuf,
    /// Output EMB1 file, one prototype row per identity.
    #[arg(long)]
    pub out: PathBuf,
    /// Label manifest for the output (default: out path with .jsonl).
    #[arg(long)]
    pub out_labels: Option<PathBuf>,
    /// Keep raw means instead of projecting them back to the sphere.
    #[arg(long)]
    pub no_renormalize: bool,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum AggregateArg {
    /// Cosine to the most similar other identity.
    #[default]
    Max,
    /// Mean cosine over all other identities.
    Mean,
}

#[derive(Debug, clap::Args)]
pub struct FilterIdsArgs {
    /// Prototype EMB1 file (one row per identity).
    #[arg(long)]
    pub prototypes: PathBuf,
    /// JSONL label manifest for the prototype file.
    #[arg(long)]
    pub labels: PathBuf,
    /// How many most-distinct identities to keep (default: config
    /// top_k_identities).
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Similarity aggregate per identity.
    #[arg(long, value_enum, default_value_t)]
    pub aggregate: AggregateArg,
    /// Run-config TOML file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output keep list (CSV, single label column).
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the full similarity report (label,score,nearest_label).
    #[arg(long)]
    pub scores: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SampleArgs {
    /// Source embeddings EMB1 file.
    #[arg(long)]
    pub bank: PathBuf,
    /// JSONL label manifest for the bank.
    #[arg(long)]
    pub labels: PathBuf,
    /// Optional keep list (from filter-ids) restricting the identities.
    #[arg(long)]
    pub keep: Option<PathBuf>,
    /// Run-config TOML file (seed, images_per_id, alpha, beta, ...).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output plan manifest (JSONL).
    #[arg(long)]
    pub out_plan: PathBuf,
    /// Output sampled embeddings (EMB1), aligned with the plan rows.
    #[arg(long)]
    pub out_emb: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct EvalVerifyArgs {
    /// Embeddings EMB1 file.
    #[arg(long)]
    pub emb: PathBuf,
    /// Pairs CSV (`a,b,label[,group][,fold]`).
    #[arg(long)]
    pub pairs: PathBuf,
    /// Fold count (default: folds config key).
    #[arg(long)]
    pub folds: Option<usize>,
    /// Run-config TOML file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output JSON report.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct EvalTarArgs {
    /// Embeddings EMB1 file.
    #[arg(long)]
    pub emb: PathBuf,
    /// Pairs CSV (`a,b,label[,group][,fold]`).
    #[arg(long)]
    pub pairs: PathBuf,
    /// FAR budget (default: far_target config key).
    #[arg(long)]
    pub far: Option<f64>,
    /// Run-config TOML file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output JSON report.
    #[arg(long)]
    pub report: PathBuf,
    /// Also write the full ROC curve as threshold,far,tar CSV.
    #[arg(long)]
    pub roc_csv: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SynthClustersArgs {
    /// Number of identities.
    #[arg(long)]
    pub ids: usize,
    /// Embedding dimension.
    #[arg(long)]
    pub dim: usize,
    /// Samples per identity.
    #[arg(long)]
    pub per_id: usize,
    /// Cluster tightness (larger = tighter).
    #[arg(long)]
    pub concentration: f64,
    /// Generation seed.
    #[arg(long)]
    pub seed: u64,
    /// Output EMB1 file.
    #[arg(long)]
    pub out_emb: PathBuf,
    /// Output JSONL label manifest.
    #[arg(long)]
    pub out_labels: PathBuf,
}

/// Install the worker pool and dispatch the parsed command.
pub fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(threads) = cli.threads {
        // Ignore the error when a pool is already installed (repeat calls
        // in one process, e.g. from tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let force = cli.force;
    match &cli.command {
        Command::EstimateShift(args) => commands::estimate_shift(args, force),
        Command::ApplyShift(args) => commands::apply_shift(args, force),
        Command::Prototype(args) => commands::prototype(args, force),
        Command::FilterIds(args) => commands::filter_ids(args, force),
        Command::Sample(args) => commands::sample(args, force),
        Command::EvalVerify(args) => commands::eval_verify(args, force),
        Command::EvalTar(args) => commands::eval_tar(args, force),
        Command::SynthClusters(args) => commands::synth_clusters(args, force),
    }
}
