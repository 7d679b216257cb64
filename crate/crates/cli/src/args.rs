use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mceprune", version, about = "Learned vertex pruning for maximum clique enumeration")]
pub struct Cli {
    /// `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translate between edge-list and DIMACS files.
    Convert(ConvertArgs),
    /// Enumerate all maximum cliques.
    Solve(SolveArgs),
    /// Write vertex or edge feature rows as CSV.
    Features(FeaturesArgs),
    /// Fit per-stage pruning models.
    Train(TrainArgs),
    /// Reduce a graph with a named strategy.
    Prune(PruneArgs),
    /// Run the degree-significance clique heuristic.
    Althea(AltheaArgs),
    /// Generate a planted-clique training corpus.
    Gen(GenArgs),
    /// Compare solve times with and without a reduction.
    Bench(BenchArgs),
    /// List the registered reduction strategies.
    Strategies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Edgelist,
    Dimacs,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Input graph.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    pub format: Option<GraphFormat>,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long)]
    pub to: GraphFormat,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Seconds before the search gives up.
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// JSON output file; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Vertex,
    Edge,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long, value_enum, default_value = "vertex")]
    pub kind: Kind,
    /// `real-graph` or `planted`.
    #[arg(long)]
    pub profile: Option<String>,
    /// Edge probability for the planted profile.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StageArgs {
    /// `cc` or `ic`.
    #[arg(long)]
    pub strategy: Option<String>,
    /// First-stage confidence threshold.
    #[arg(long)]
    pub q: Option<f64>,
    /// Per-stage increment for `ic`.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub stages: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Planted corpus manifest written by `gen`.
    #[arg(long, conflicts_with_all = ["rows", "graphs"])]
    pub manifest: Option<PathBuf>,
    /// Labelled rows CSV written by `gen`.
    #[arg(long, conflicts_with = "graphs")]
    pub rows: Option<PathBuf>,
    /// Graph files to solve and learn from.
    #[arg(long, num_args = 1..)]
    pub graphs: Vec<PathBuf>,
    #[arg(long)]
    pub format: Option<GraphFormat>,
    /// Profile for `--rows` and `--graphs` input.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub stage: StageArgs,
    /// `original` or `resolve`.
    #[arg(long)]
    pub stage_labels: Option<String>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub l2: Option<f64>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving `model-stage<N>.json` and `train-summary.json`.
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReductionArgs {
    /// Registered strategy name (see `strategies`).
    #[arg(long)]
    pub method: Option<String>,
    /// Shorthand for `--method dense-1stage` or `--method sparse-5stage`.
    #[arg(long, conflicts_with = "method")]
    pub preset: Option<String>,
    /// Model files, one per stage or a single shared one.
    #[arg(long, num_args = 1..)]
    pub models: Vec<PathBuf>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub stages: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[command(flatten)]
    pub reduction: ReductionArgs,
    /// Also solve both graphs and add an evaluation to the report.
    #[arg(long)]
    pub evaluate: bool,
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// JSON report; stdout when omitted.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Reduced graph in DIMACS form.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AltheaArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Minimum number of labelled rows.
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write every instance as DIMACS.
    #[arg(long)]
    pub write_graphs: bool,
    #[arg(long)]
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TimingStat {
    Median,
    Mean,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Graph files to benchmark.
    #[arg(long, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub format: Option<GraphFormat>,
    /// Generate planted instances instead: vertex count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Planted clique size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of generated instances.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub reduction: ReductionArgs,
    /// Timing repetitions per measurement.
    #[arg(long)]
    pub runs: Option<usize>,
    #[arg(long, value_enum)]
    pub timing: Option<TimingStat>,
    /// Per-solve time limit in seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub threads: Option<usize>,
    /// CSV table; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}
