use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sssp_lab::{Check, GenSpec};

#[derive(Debug, Parser)]
#[command(name = "sssp-lab", version, about = "Generate graphs, run shortest-path solvers, compare them with the oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph in DIMACS .gr format.
    Gen(GenArgs),
    /// Run one solver and print distances and metrics.
    Run(RunArgs),
    /// Run several solvers plus the oracle and check the expected orderings.
    Compare(CompareArgs),
    /// Time solvers over one or more graphs and emit one row per pair.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Parallel {
    Off,
    On,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Generator spec, e.g. `dag:n=100,m=400,seed=7`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub spec: GenSpec,
    /// Overrides the seed in the spec.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where the graph comes from. Exactly one of the two.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct GraphInput {
    /// DIMACS .gr file.
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Generator spec, e.g. `random:n=50,m=200,seed=1`.
    #[arg(long = "gen", value_name = "SPEC")]
    pub spec: Option<GenSpec>,
}

#[derive(Debug, Args)]
pub struct SolveFlags {
    /// Source vertex, 0-based.
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    /// Overrides the seed of a generator spec.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check invariants against oracle costs while solving.
    #[arg(long)]
    pub debug_invariants: bool,
    #[arg(long, value_enum, default_value_t = Parallel::Off)]
    pub parallel: Parallel,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Solver name: dijkstra, sp1, sp2, sp3, sp4 or oracle.
    #[arg(long)]
    pub algo: String,
    #[command(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    pub flags: SolveFlags,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated solver names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub algo: Vec<String>,
    #[command(flatten)]
    pub input: GraphInput,
    /// Checks to enforce; all of them if omitted.
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<Check>,
    /// Number of generated graphs, seeds counting up from the spec's seed.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[command(flatten)]
    pub flags: SolveFlags,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated solver names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub algo: Vec<String>,
    /// DIMACS .gr files; may be repeated.
    #[arg(long, value_name = "PATH")]
    pub graph: Vec<PathBuf>,
    /// Generator specs; may be repeated.
    #[arg(long = "gen", value_name = "SPEC")]
    pub spec: Vec<GenSpec>,
    /// Repetitions per solver and graph; the wall time is their median.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub source: usize,
    /// Overrides the seed of every generator spec.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Parallel::Off)]
    pub parallel: Parallel,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
