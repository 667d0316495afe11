//! Command-line argument definitions.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

/// Stream-learning experiments for imbalanced regression.
#[derive(Debug, Parser)]
#[command(name = "histream", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic imbalanced regression stream as a CSV file.
    Datagen(DatagenArgs),
    /// Run a grid of prequential experiments, one CSV row per run.
    Run(Box<RunArgs>),
    /// Aggregate run CSVs into a summary JSON plus plot-ready series.
    Report(ReportArgs),
}

#[derive(Debug, clap::Args)]
pub struct DatagenArgs {
    /// Number of instances to generate (must be at least 1).
    #[arg(long)]
    pub n: usize,

    /// Fraction of instances drawn from the rare regions.
    #[arg(long, default_value_t = 0.05)]
    pub rare_frac: f64,

    /// Generator seed.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

/// Flags for the run command. Every unset flag falls back to the config
/// file (when given), then to the built-in defaults.
#[derive(Debug, Default, clap::Args)]
pub struct RunArgs {
    /// Flat key=value settings file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Input dataset CSV.
    #[arg(long)]
    pub data: Option<PathBuf>,

    /// Target column: a header name or a zero-based column index.
    #[arg(long)]
    pub target: Option<String>,

    /// baseline | hist-us | hist-os | cheby-us | cheby-os | all
    #[arg(long)]
    pub strategy: Option<String>,

    /// target-mean | online-linear | window-knn | all
    #[arg(long)]
    pub learner: Option<String>,

    /// Repetitions per grid cell.
    #[arg(long)]
    pub runs: Option<u32>,

    /// Base seed; run i uses seed base + i.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Selection sharpness for histogram-driven sampling.
    #[arg(long)]
    pub beta: Option<f64>,

    /// Replication decay factor for oversampling (must exceed 1).
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Probability of keeping an otherwise-discarded common instance.
    #[arg(long)]
    pub second_chance: Option<f64>,

    /// Relevance threshold for the weighted RMSE.
    #[arg(long)]
    pub thr_phi: Option<f64>,

    /// Integration step of the squared-error-area metric.
    #[arg(long)]
    pub sera_step: Option<f64>,

    /// Fraction of the stream used to warm up the density estimate.
    #[arg(long)]
    pub warm_frac: Option<f64>,

    /// Fraction of the stream used for training-only selection.
    #[arg(long)]
    pub train_frac: Option<f64>,

    /// Initial bin count of the incremental histogram.
    #[arg(long)]
    pub bins: Option<usize>,

    /// Bin-count fraction that triggers a histogram split.
    #[arg(long)]
    pub split_threshold: Option<f64>,

    /// Hard cap on histogram bins.
    #[arg(long)]
    pub max_bins: Option<usize>,

    /// Sliding-window capacity of the nearest-neighbor learner.
    #[arg(long)]
    pub window: Option<usize>,

    /// Neighbor count of the nearest-neighbor learner.
    #[arg(long)]
    pub knn: Option<usize>,

    /// Learning rate of the online linear learner.
    #[arg(long)]
    pub lr: Option<f64>,

    /// Worker threads for independent runs (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,

    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ReportArgs {
    /// Run CSV files produced by the run command.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Output directory for summary.json and the plot series.
    #[arg(long, default_value = "report")]
    pub out: PathBuf,
}
