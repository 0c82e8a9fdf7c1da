use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qamp",
    version,
    about = "Amplitude amplification and estimation experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Grover search for a set of marked indices.
    Grover(GroverArgs),
    /// Estimate the number of marked indices by amplitude estimation.
    Count(CountArgs),
    /// Estimate a Bernoulli amplitude.
    Qae(QaeArgs),
    /// Monte Carlo mean of a payoff, quantum and classical.
    Qmc(QmcArgs),
    /// Expected loss of the GCI credit portfolio.
    CreditRisk(CreditArgs),
    /// Error-versus-cost benchmark and log-log regression.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Root seed; falls back to QAMP_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write a CSV here and a JSON summary next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimationArgs {
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub shots_per_round: u64,
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    #[arg(long)]
    pub qubits: usize,
    /// Marked basis indices, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub marked: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub qubits: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub marked: Vec<usize>,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct QaeArgs {
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PayoffKind {
    /// `f(x) = x / (2^bits − 1)` on a uniform register.
    Linear,
    /// `f(x) = x` on a uniform register, estimated by dyadic slicing.
    Identity,
    /// European power option on a lognormal grid.
    PowerOption,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Quantum,
    Classical,
    Both,
}

#[derive(Debug, Args)]
pub struct QmcArgs {
    #[arg(long, value_enum, default_value_t = PayoffKind::Linear)]
    pub payoff: PayoffKind,
    #[arg(long, value_enum, default_value_t = MethodChoice::Both)]
    pub method: MethodChoice,
    #[arg(long, default_value_t = 3)]
    pub bits: usize,
    /// Classical sample count; defaults to ⌈z²/(4ε²)⌉.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 2.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.02)]
    pub rate: f64,
    #[arg(long, default_value_t = 0.2)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, default_value_t = 1.0)]
    pub exponent: f64,
    #[arg(long, default_value_t = 2.0)]
    pub strike: f64,
    #[arg(long, default_value_t = 3.0)]
    pub z_max: f64,
    #[command(flatten)]
    pub estimation: EstimationArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CreditArgs {
    /// TOML file with keys n_z, z_max, p_zeros, rhos, lgd, alpha.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n_z: Option<usize>,
    #[arg(long)]
    pub z_max: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub p_zeros: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub rhos: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub lgd: Option<Vec<u64>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 100)]
    pub shots_per_round: u64,
    /// Weight grid points by bin mass instead of density.
    #[arg(long)]
    pub bin_weights: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 0.25)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.04, 0.02, 0.01, 0.005])]
    pub eps: Vec<f64>,
    /// Number of seeds; runs use `seed, seed+1, …`.
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub shots_per_round: u64,
    /// Fill the wall_ms column; makes output run-dependent.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub common: Common,
}
