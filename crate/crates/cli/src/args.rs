use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "netclt", version, about = "Final sizes of SIR epidemics and percolation on configuration-model graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for replicate fan-out (1 runs sequentially).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form mean and variance of the final size.
    Theory(TheoryArgs),
    /// Monte Carlo final sizes from the jump-chain engine.
    Simulate(SimulateArgs),
    /// Table of simulated and asymptotic moments for NSW, eps = 0.05, p_I = 0.3.
    ReproduceTable(TableArgs),
    /// Largest component after bond or site percolation of explicit graphs.
    Percolate(PercolateArgs),
    /// Quadrature, fluid-limit and enumeration checks of the closed forms.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Mr,
    Nsw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoryMode {
    Epidemic,
    Bond,
    Site,
    Giant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Epidemic,
    /// Also count infected individuals with an infinite infectious period.
    SiteCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Bond,
    Site,
}

/// Infectious period and contact rate, or a transmission probability with a matched period.
#[derive(Debug, Clone, Args)]
pub struct TransmissionArgs {
    /// `const[:c]`, `exp[:rate]` or `zeroinf[:pi]`.
    #[arg(long, default_value = "const")]
    pub period: String,

    /// Per-neighbour transmission probability.
    #[arg(long = "pI")]
    pub p_i: Option<f64>,

    /// Contact rate along each edge.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    /// Degree distribution, e.g. `poisson:5`, `const:5`, `geom:0.1667`, `power:1:13.796`.
    #[arg(long)]
    pub degree: String,

    #[arg(long, value_enum, default_value_t = TheoryMode::Epidemic)]
    pub mode: TheoryMode,

    /// Initially infective fraction, chosen at random; omit for the major-outbreak limit.
    #[arg(long)]
    pub eps: Option<f64>,

    /// Per-degree initially infective fractions `eps_0,eps_1,...` (MR only).
    #[arg(long, value_delimiter = ',', conflicts_with = "eps")]
    pub eps_i: Option<Vec<f64>>,

    /// Retention probability for bond or site percolation.
    #[arg(long)]
    pub pi: Option<f64>,

    #[command(flatten)]
    pub transmission: TransmissionArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,

    #[arg(long)]
    pub degree: String,

    #[arg(long)]
    pub n: usize,

    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,

    #[arg(long, env = "NETCLT_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Initially infective fraction.
    #[arg(long, conflicts_with = "a")]
    pub eps: Option<f64>,

    /// Number of initial infectives (default 1).
    #[arg(long)]
    pub a: Option<usize>,

    #[arg(long, value_enum, default_value_t = SimMode::Epidemic)]
    pub mode: SimMode,

    /// Base of the logarithm in the major-outbreak threshold `T >= log n`.
    #[arg(long, default_value_t = std::f64::consts::E)]
    pub log_base: f64,

    #[command(flatten)]
    pub transmission: TransmissionArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Population sizes of the simulated rows.
    #[arg(long, value_delimiter = ',', default_value = "200,500,1000,2000,5000,10000")]
    pub ns: Vec<usize>,

    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,

    #[arg(long, env = "NETCLT_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Degree specs, one block of rows each.
    #[arg(
        long,
        value_delimiter = ';',
        default_value = "const:5;poisson:5;geom:0.16666666666666666;power:1:13.796"
    )]
    pub degrees: Vec<String>,
}

#[derive(Debug, Args)]
pub struct PercolateArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,

    #[arg(long, value_enum)]
    pub model: ModelArg,

    #[arg(long)]
    pub degree: String,

    #[arg(long)]
    pub n: usize,

    /// Retention probability.
    #[arg(long)]
    pub pi: f64,

    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,

    #[arg(long, env = "NETCLT_SEED", default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, env = "NETCLT_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Simulator replicates per enumerated instance.
    #[arg(long, default_value_t = 100_000)]
    pub enum_reps: usize,

    /// Skip every check (harness self-test).
    #[arg(long)]
    pub empty_grid: bool,

    /// Relative shift added to every closed-form variance (harness self-test).
    #[arg(long, default_value_t = 0.0, hide = true)]
    pub perturb: f64,
}
