use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Informational energy, Onicescu correlation and Cauchy-Schwarz/Hölder
/// divergences of exponential-family densities.
#[derive(Debug, Parser)]
#[command(name = "infoenergy", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Informational energy I(p) = ∫p².
    Energy(Single),
    /// Cross informational energy I(p, q) = ∫pq.
    Cross(Pair),
    /// Onicescu correlation coefficient ρ(p, q).
    Rho(Pair),
    /// Cauchy-Schwarz divergence −log ρ(p, q).
    Csd(Pair),
    /// Hölder divergence with exponents α, β = α/(α−1) and power γ.
    Holder(HolderArgs),
    /// Shannon entropy.
    Entropy(Single),
    /// Jensen energy divergence ¼∫(p − q)².
    Jensen(Pair),
    /// Informational energy of a finite mixture.
    Mixture(MixtureArgs),
    /// Compare closed forms with the quadrature oracle over a parameter grid.
    Verify(VerifyArgs),
    /// Entropy and energy of every family at its default parameters.
    Table(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Closed,
    Omega,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    LogSubstitution,
    RationalMap,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "json")]
    pub output: Format,
    /// Quadrature settings file (key=value lines).
    #[arg(long, env = "INFOENERGY_CONFIG")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Change of variables for half-line supports.
    #[arg(long, value_enum)]
    pub transform: Option<Transform>,
    #[arg(long)]
    pub series_cutoff: Option<f64>,
    #[arg(long)]
    pub series_max_terms: Option<usize>,
    /// Echo natural parameters alongside source parameters.
    #[arg(long)]
    pub show_natural: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Single {
    #[arg(long)]
    pub family: String,
    /// Source parameters, e.g. `mu=0,sigma=1` (list values separated by `:`).
    #[arg(long)]
    pub params: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: Method,
    /// Support point for the ω-trick (coordinates separated by `:`).
    #[arg(long)]
    pub omega: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct Pair {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub params: String,
    #[arg(long)]
    pub params2: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: Method,
    #[arg(long)]
    pub omega: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct HolderArgs {
    #[command(flatten)]
    pub pair: Pair,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct MixtureArgs {
    #[arg(long)]
    pub family: String,
    /// Mixture weights, e.g. `0.5,0.5`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub weights: Vec<f64>,
    /// Source parameters of one component; repeat once per weight.
    #[arg(long, required = true)]
    pub component: Vec<String>,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: Method,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub family: String,
    /// Shape parameters selecting the family member, e.g. `k=2` (Pareto) or `d=3` (MVN).
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long, default_value = "default")]
    pub grid: String,
    #[command(flatten)]
    pub common: Common,
}
