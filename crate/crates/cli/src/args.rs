use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "patrol", version, about = "Plan, simulate and evaluate multi-robot patrols on roadmaps")]
pub struct Cli {
    /// Where to write the run manifest (default: next to the first output).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Min-max partition of a chain into robot clusters.
    Partition(PartitionArgs),
    /// Closed-form team trajectory on a chain.
    Synth(SynthArgs),
    /// Distributed synchronization simulation on a chain.
    Simulate(SimulateArgs),
    /// Refresh time and latency of a trajectory file.
    Eval(EvalArgs),
    /// Noise-variance sweep of the simulator.
    Sweep(SweepArgs),
    /// Subtree-collection patrol on a tree.
    Tree(TreeArgs),
    /// Min-max path cover of a roadmap and its sweep schedule.
    Cover(CoverArgs),
    /// Chain built from an open spanning-tree tour.
    Chainify(ChainifyArgs),
    /// Re-execute a run from its manifest and compare outputs.
    Rerun(RerunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Partition(_) => "partition",
            Command::Synth(_) => "synth",
            Command::Simulate(_) => "simulate",
            Command::Eval(_) => "eval",
            Command::Sweep(_) => "sweep",
            Command::Tree(_) => "tree",
            Command::Cover(_) => "cover",
            Command::Chainify(_) => "chainify",
            Command::Rerun(_) => "rerun",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct RoadmapIn {
    /// Roadmap JSON file.
    #[arg(long)]
    pub roadmap: PathBuf,
    /// Report triangle-inequality violations as warnings.
    #[arg(long)]
    pub allow_triangle_violations: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ChainIn {
    /// Chain roadmap JSON file.
    #[arg(long, required_unless_present = "case_study", conflicts_with = "case_study")]
    pub roadmap: Option<PathBuf>,
    /// Use the built-in 30-viewpoint case-study chain.
    #[arg(long)]
    pub case_study: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub input: RoadmapIn,
    /// Number of robots.
    #[arg(short = 'm', long = "robots")]
    pub m: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    /// Use the exact search instead of bisection.
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthMode {
    /// Minimum refresh time.
    Rt,
    /// Minimum up-latency.
    Up,
    /// Minimum latency.
    Lat,
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    #[command(flatten)]
    pub input: RoadmapIn,
    #[arg(short = 'm', long = "robots")]
    pub m: usize,
    #[arg(long, value_enum, default_value = "rt")]
    pub mode: SynthMode,
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    /// Trajectory length; defaults to ten periods.
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: ChainIn,
    /// Number of robots (default 10 for the case study).
    #[arg(short = 'm', long = "robots")]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[arg(long, default_value_t = 400.0)]
    pub horizon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-step motion noise variance.
    #[arg(long, default_value_t = 0.0)]
    pub sigma2: f64,
    /// Robot stop as `ROBOT:START[:END]`, robots numbered from 1.
    #[arg(long = "fail")]
    pub fail: Vec<String>,
    /// Silence after which a waiting robot suspects its neighbour.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Sampled trace CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Exact trajectory JSON, readable by `eval`.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Events, partitions and post-convergence metrics as JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relay {
    Starts,
    Intervals,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: RoadmapIn,
    /// Trajectory JSON (chain or graph form).
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub warmup: f64,
    /// Count boundary gaps in full instead of capping them at the period.
    #[arg(long)]
    pub strict: bool,
    /// Also evaluate on samples taken every `dt`.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long, value_enum, default_value = "starts")]
    pub relay: Relay,
    /// Metrics JSON (printed when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: ChainIn,
    #[arg(short = 'm', long = "robots")]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    /// Comma-separated variances (default 0, 0.02, ..., 0.5).
    #[arg(long, value_delimiter = ',')]
    pub variances: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: available cores).
    #[arg(long)]
    #[serde(skip)]
    pub workers: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    pub dt: f64,
    #[arg(long, default_value_t = 400.0)]
    pub horizon: f64,
    /// Start of the measurement window.
    #[arg(long, default_value_t = 200.0)]
    pub warmup: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeStrategy {
    /// Best subtree collection.
    Optimal,
    /// Best collection with one robot per subtree.
    Partition,
    /// Whole tree shared by all robots.
    Cyclic,
}

#[derive(Debug, Args, Serialize)]
pub struct TreeArgs {
    #[command(flatten)]
    pub input: RoadmapIn,
    #[arg(short = 'm', long = "robots")]
    pub m: usize,
    #[arg(long, value_enum, default_value = "optimal")]
    pub strategy: TreeStrategy,
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CoverArgs {
    #[command(flatten)]
    pub input: RoadmapIn,
    #[arg(short = 'm', long = "robots")]
    pub m: usize,
    /// Also compute the optimal cover by exhaustive search.
    #[arg(long)]
    pub oracle: bool,
    /// Apply a 2-opt pass to each path.
    #[arg(long)]
    pub improve: bool,
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Sweep schedule as graph trajectory JSON.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ChainifyArgs {
    #[command(flatten)]
    pub input: RoadmapIn,
    /// Chain roadmap JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Robots for the chain schedule and its ratio certificate.
    #[arg(short = 'm', long = "robots")]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    pub eps: f64,
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    /// Tour, back-map and certificate as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RerunArgs {
    /// Manifest written by an earlier run.
    pub manifest_file: PathBuf,
}
