use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "carasolve",
    version,
    about = "Integral-form solutions of scalar ODEs with discontinuous right-hand sides"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximal and minimal solutions by monotone iteration of the integral map
    Solve(SolveArgs),
    /// Convergence table |f_n - f| of the step-grid approximations
    Approx(ApproxArgs),
    /// Check a candidate trajectory (CSV `x,y`) against the sub-solution inequality
    Verify(VerifyArgs),
    /// Scripted scenarios
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Subcommand, Debug)]
pub enum DemoCommand {
    /// Sign right-hand side: Euler chattering and residuals of the candidate family
    Sign(SignArgs),
    /// sin(pi/y) right-hand side: band crossings of the candidate family
    Sin(SinArgs),
    /// Increasing right-hand sides against their exact solutions
    Positive(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every command. Each one overrides the same key in `--config`.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Builtin right-hand side: grande_sign, grande_sin, const, floor, sqrt_plus, linear
    #[arg(long)]
    pub rhs: Option<String>,
    /// Builtin parameter, repeatable
    #[arg(long = "param", value_name = "P", allow_negative_numbers = true)]
    pub params: Vec<f64>,
    /// Initial value
    #[arg(long, allow_negative_numbers = true)]
    pub y0: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    /// Number of partition cells
    #[arg(long, value_name = "M")]
    pub grid: Option<usize>,
    /// Stopping threshold on the sup-norm step of the iteration
    #[arg(long)]
    pub tol_iter: Option<f64>,
    /// Tolerance for fixed-point residuals and sub-solution margins
    #[arg(long)]
    pub tol_res: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for report and trajectory files
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Iterate even without the increasing and usc flags; the result is never certified
    #[arg(long)]
    pub force_heuristic: bool,
    /// TOML file with defaults for any of these keys
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub common: Common,
    /// Number of random probe points drawn from the window
    #[arg(long)]
    pub points: Option<usize>,
    /// Probe these heights instead of random ones, repeatable
    #[arg(long = "at", value_name = "Y", allow_negative_numbers = true)]
    pub at: Vec<f64>,
    /// Comma-separated grid indices n
    #[arg(long, value_delimiter = ',')]
    pub n_list: Vec<u32>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub window: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Candidate trajectory, CSV with columns `x,y`
    #[arg(long, value_name = "FILE")]
    pub candidate: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SignArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated Euler step sizes
    #[arg(long, value_delimiter = ',')]
    pub steps: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct SinArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',')]
    pub steps: Vec<f64>,
    /// Largest band index searched
    #[arg(long)]
    pub n0_max: Option<u64>,
}
