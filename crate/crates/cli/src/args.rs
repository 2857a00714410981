use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use redblue::generators::{Flavor, RandomModel, ReductionMode};
use redblue::oracle::OracleConfig;
use redblue::{Objective, StructureKind, Weight};

#[derive(Debug, Parser)]
#[command(name = "redblue", version, about = "Partitioned-pairs network optimization toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Solve an instance with the approximation algorithm or the exact oracle.
    Solve(SolveArgs),
    /// Compare the approximation algorithm against a reference over many instances.
    Experiment(ExperimentArgs),
    /// Check a SAT reduction on a DIMACS formula.
    VerifyReduction(VerifyArgs),
    /// Validate an instance and optionally a solution or coloring.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    TightMst,
    TightTsp,
    Lift,
    Random,
    #[value(name = "reduce-3sat")]
    Reduce3sat,
    #[value(name = "reduce-1in3")]
    Reduce1in3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Approx,
    Oracle,
}

#[derive(Debug, Clone, Args)]
pub struct CapArgs {
    /// Largest pair count the oracle enumerates for spanning trees.
    #[arg(long, default_value_t = OracleConfig::default().mst_pair_cap)]
    pub mst_cap: usize,
    /// Largest pair count the oracle enumerates for tours.
    #[arg(long, default_value_t = OracleConfig::default().tsp_pair_cap)]
    pub tsp_cap: usize,
    /// Largest pair count the oracle enumerates for matchings.
    #[arg(long, default_value_t = OracleConfig::default().matching_pair_cap)]
    pub matching_cap: usize,
    /// Number of coloring shards searched in parallel.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
}

impl CapArgs {
    pub fn oracle_config(&self) -> OracleConfig {
        let mut cfg = OracleConfig {
            mst_pair_cap: self.mst_cap,
            tsp_pair_cap: self.tsp_cap,
            matching_pair_cap: self.matching_cap,
            jobs: self.jobs as usize,
            ..OracleConfig::default()
        };
        cfg.solver_caps.tsp = cfg.solver_caps.tsp.max(self.tsp_cap);
        cfg.solver_caps.matching = cfg.solver_caps.matching.max(self.matching_cap);
        cfg
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    /// Output instance file.
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long)]
    pub lambda: Option<usize>,
    #[arg(long, default_value = "1/1024")]
    pub eps: Weight,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "uniform")]
    pub model: RandomModel,
    /// Base metric for `lift`: a JSON array of rows of weights.
    #[arg(long, conflicts_with = "cities")]
    pub base: Option<PathBuf>,
    /// Number of random cities for `lift` when no base file is given.
    #[arg(long)]
    pub cities: Option<usize>,
    /// DIMACS formula for the reductions.
    #[arg(long)]
    pub cnf: Option<PathBuf>,
    #[arg(long, default_value = "compact")]
    pub mode: ReductionMode,
    /// Node labels of a reduction instance (default: next to the output).
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    /// Adversarial and favorable plans of a tight family.
    #[arg(long)]
    pub plans: Option<PathBuf>,
    /// Dummy graph of a 2-matching reduction, as JSON.
    #[arg(long)]
    pub dummy_graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, short)]
    pub instance: PathBuf,
    #[arg(long)]
    pub kind: StructureKind,
    #[arg(long)]
    pub objective: Objective,
    #[arg(long, value_enum, default_value = "approx")]
    pub engine: Engine,
    /// Tie-break plan (JSON) for the approximation algorithm.
    #[arg(long)]
    pub plan: Option<PathBuf>,
    /// Solution output file.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// JSON experiment config; flags below are ignored when given.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    pub kind: Option<StructureKind>,
    #[arg(long, required_unless_present = "config")]
    pub objective: Option<Objective>,
    /// Instance source: random, tight-mst, tight-tsp or files.
    #[arg(long, default_value = "random")]
    pub source: String,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Pair counts, cycled through: `4` or `2..6`.
    #[arg(long, default_value = "4")]
    pub pairs: String,
    /// Comma-separated random models, cycled through.
    #[arg(long, default_value = "uniform")]
    pub models: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated lambda values for tight sources.
    #[arg(long, default_value = "4,8,16,32")]
    pub lambdas: String,
    #[arg(long, default_value = "1/1024")]
    pub eps: Weight,
    /// Instance files for the `files` source.
    #[arg(long, num_args = 1..)]
    pub instances: Vec<PathBuf>,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cnf: PathBuf,
    #[arg(long)]
    pub flavor: Flavor,
    #[arg(long, default_value = "compact")]
    pub mode: ReductionMode,
    /// Largest real-node count searched for a cycle cover.
    #[arg(long, default_value_t = 80)]
    pub cover_cap: usize,
    /// JSON report output.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub caps: CapArgs,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, short)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: Option<PathBuf>,
    #[arg(long)]
    pub coloring: Option<PathBuf>,
}
