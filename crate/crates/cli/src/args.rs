use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Parser, Debug)]
#[command(name = "heun-ghf", version, about = "Generalized hypergeometric solutions of the general Heun equation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Find every admissible (q, e_1..e_N) for ε = -N (or a positive integer ε)
    Reduce(ReduceArgs),
    /// Monic polynomial in q whose roots are the admissible accessory parameters
    Qpoly(QpolyArgs),
    /// Evaluate an assembled solution and its ODE residual at points z
    Eval(EvalArgs),
    /// Bound-state energies of V0 + V1/√(1 - e^{-x/σ})
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Write results here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Log progress to stderr
    #[arg(long, global = true)]
    pub verbose: bool,
}

/// Parses `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(num(re)?, num(im)?),
        None => Complex64::new(num(s)?, 0.0),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Heun parameters other than δ, which follows from the Fuchsian relation.
/// Complex values are written `re,im`.
#[derive(Args, Debug, Clone)]
pub struct HeunArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub gamma: Complex64,
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random Newton starts per pass [default: max(64, 32(N+1))]
    #[arg(long)]
    pub starts: Option<usize>,
    /// Newton residual tolerance
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("order").required(true).args(["n", "epsilon"])))]
pub struct ReduceArgs {
    #[command(flatten)]
    pub heun: HeunArgs,
    /// Order: ε = -N
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Positive integer ε >= 2, solved through the power transform
    #[arg(long)]
    pub epsilon: Option<usize>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct QpolyArgs {
    #[command(flatten)]
    pub heun: HeunArgs,
    #[arg(long = "N")]
    pub n: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub heun: HeunArgs,
    #[arg(long = "N")]
    pub n: usize,
    /// Which solution (in the order printed by `reduce`)
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    /// Evaluation point, `re` or `re,im`; repeat for several
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required = true)]
    pub z: Vec<Complex64>,
    /// Use the solution about z = 1 (a series in 1 - z)
    #[arg(long)]
    pub second_solution: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub starts: Option<usize>,
    /// Series truncation tolerance
    #[arg(long, default_value_t = 1e-15)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long = "V0", default_value_t = 1.0, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long = "V1", default_value_t = -1.0, allow_hyphen_values = true)]
    pub v1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// 2mσ²/ħ²
    #[arg(long = "mass-scale", default_value_t = 1.0)]
    pub mass_scale: f64,
    /// Lower end of the search window [default: a bound on the ground state]
    #[arg(long, allow_hyphen_values = true)]
    pub emin: Option<f64>,
    /// Upper end of the search window [default: just below the threshold]
    #[arg(long, allow_hyphen_values = true)]
    pub emax: Option<f64>,
    #[arg(long, default_value_t = heun_ghf::quantum::DEFAULT_GRID)]
    pub grid: usize,
    /// Also solve by direct shooting and compare
    #[arg(long)]
    pub shooting: bool,
    /// Relative tolerance for the shooting comparison
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}
