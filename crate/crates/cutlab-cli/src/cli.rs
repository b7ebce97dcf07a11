//! Argument surface of the `cutlab` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cutlab",
    version,
    about = "Exact multiway-cut structure, pattern constants and seeded experiments on small graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a random graph and print it.
    Gen(GenArgs),
    /// Compute the maximum r-cut size of a graph.
    Maxcut(MaxcutArgs),
    /// Enumerate all r-cuts within a deficit budget of the maximum.
    Cuts(CutsArgs),
    /// Compute the vertex-pair equivalence structure, components and core.
    Eq(EqArgs),
    /// Check core existence and the core-class size condition.
    Core(CoreArgs),
    /// List the edges crossing every maximum r-cut.
    Crit(CritArgs),
    /// Print the invariants and threshold constants of a builtin pattern.
    Hconst(HconstArgs),
    /// Find the maximum pattern-free subgraph and its witnesses.
    Hfree(HfreeArgs),
    /// Decide whether every maximum pattern-free subgraph is (chi-1)-partite.
    Simonovits(SimonovitsArgs),
    /// First and second moment sums over the copy hypergraph in a clique host.
    Janson(JansonArgs),
    /// Run a seeded experiment from a config file.
    Experiment(ExperimentArgs),
}

/// How a sampled or derived graph is printed.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// One-line graph6.
    G6,
    /// Header `n m`, then one `u v` line per edge.
    Edges,
}

/// Output encoding for result values.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// Bare human-readable value(s).
    Plain,
    /// One JSON document.
    Json,
}

/// Random graph model.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Uniform graph with exactly m edges.
    Gnm,
    /// Each edge present independently with probability p.
    Gnp,
}

/// Which engine computes cut quantities.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Dispatch between branch-and-bound and the dense-sweep engine.
    Auto,
    /// Exhaustive r^n reference enumeration (tiny graphs only).
    Naive,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Random graph model.
    #[arg(long, value_enum, default_value_t = Model::Gnm)]
    pub model: Model,
    /// Number of vertices.
    #[arg(long)]
    pub n: usize,
    /// Number of edges (gnm model).
    #[arg(long)]
    pub m: Option<usize>,
    /// Edge probability (gnp model).
    #[arg(long)]
    pub p: Option<f64>,
    /// Master seed; the same seed always yields the same graph.
    #[arg(long)]
    pub seed: u64,
    /// Stream index for drawing several graphs from one master seed.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = GraphFormat::G6)]
    pub format: GraphFormat,
}

#[derive(Args, Debug)]
pub struct GraphInput {
    /// Graph file (graph6 or edge list); `-` reads standard input.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct MaxcutArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Number of parts.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Engine choice.
    #[arg(long, value_enum, default_value_t = Engine::Auto)]
    pub engine: Engine,
    /// Search-state budget before the instance is declared too large.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct CutsArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Number of parts.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Deficit budget: cuts of size >= maximum - d are listed.
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    /// Search-state budget before the instance is declared too large.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output encoding (plain prints one JSON cut per line).
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct EqArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Number of parts.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Deficit budget; -1 uses the canonical maximum cut alone.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub d: i64,
    /// Search-state budget before the instance is declared too large.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CoreArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Number of parts.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Deficit budget; -1 uses the canonical maximum cut alone.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub d: i64,
    /// Core-component size tolerance in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    /// Search-state budget before the instance is declared too large.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CritArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Number of parts.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Search-state budget before the instance is declared too large.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct HconstArgs {
    /// Builtin pattern name: K3, K4, K5, C5 or C7.
    #[arg(long)]
    pub pattern: String,
}

#[derive(Args, Debug)]
pub struct HfreeArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Builtin pattern name: K3, K4, K5, C5 or C7.
    #[arg(long)]
    pub pattern: String,
    /// Also list every maximum pattern-free witness as an edge list.
    #[arg(long)]
    pub witnesses: bool,
}

#[derive(Args, Debug)]
pub struct SimonovitsArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Builtin pattern name: K3, K4, K5, C5 or C7.
    #[arg(long)]
    pub pattern: String,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct JansonArgs {
    /// Builtin pattern name: K3, K4, K5, C5 or C7.
    #[arg(long)]
    pub pattern: String,
    /// Host clique size.
    #[arg(long)]
    pub n: usize,
    /// Edge probability entering the moment sums.
    #[arg(long)]
    pub p: f64,
    /// Distinguished edge `u,v`: sums run over copies through it, with the
    /// edge itself removed from each member.
    #[arg(long)]
    pub edge: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// Experiment config file (`key = value` lines).
    #[arg(long)]
    pub config: PathBuf,
    /// Override one config key, e.g. `--set trials=50` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Worker threads for trials; any value yields identical output.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the per-grid-point CSV here (`-` for standard output).
    #[arg(long, default_value = "-")]
    pub csv: PathBuf,
    /// Also write a JSON summary to this path (`-` for standard output).
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Also write per-trial records as JSON lines to this path (implies
    /// retaining trial records).
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
}
