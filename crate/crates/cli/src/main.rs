//! Command-line front end: wires problem specs to the solvers and emits
//! CSV tables, comparison reports, and ASCII plots.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "deltasolve",
    version,
    about = "Discrete delta-calculus solvers for constant-coefficient difference equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and print the solution table
    Solve(SolveArgs),
    /// Scan (0, 4) for boundary eigenvalues x(b, lambda) = 0
    Scan(ScanArgs),
    /// Reproduce the published relaxation tables, with oracle columns
    CompareTables(CompareArgs),
    /// Run the self-verification property suite
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct SolveArgs {
    /// Problem family: hydrogen | coulomb | relaxation | custom
    #[arg(long)]
    pub problem: Option<String>,
    /// Spectral parameter (defaults: 1 for hydrogen/coulomb, 0.0625 for relaxation)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Potential / forcing expression in n, e.g. "1/sqrt(n)"
    #[arg(long)]
    pub q: Option<String>,
    /// Coulomb strength A in the hydrogen potential A/n + q(n)
    #[arg(long = "A")]
    pub coulomb_a: Option<f64>,
    /// Angular quantum number l in l(l+1)/n^2
    #[arg(long = "l")]
    pub angular_l: Option<u32>,
    /// Right endpoint of the grid for hydrogen/coulomb
    #[arg(long)]
    pub b: Option<i64>,
    /// Last sample index for relaxation/custom
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Comma-separated coefficients r_0,...,r_{N-1} (custom problems)
    #[arg(long)]
    pub coeffs: Option<String>,
    /// Comma-separated initial values x(0),...,x(N-1) (custom problems)
    #[arg(long)]
    pub seeds: Option<String>,
    /// Oracle column: on | off | exact
    #[arg(long)]
    pub oracle: Option<String>,
    /// Decimal digits in the output (1..=17, default 6)
    #[arg(long)]
    pub precision: Option<usize>,
    /// Output format: csv | pretty
    #[arg(long)]
    pub output: Option<String>,
    /// Append a 64x16 ASCII plot of the solution
    #[arg(long)]
    pub plot: bool,
    /// key=value defaults file; command-line flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScanArgs {
    /// Problem family: hydrogen | coulomb
    #[arg(long)]
    pub problem: Option<String>,
    /// Keep only eigenvalues >= this value
    #[arg(long = "lambda-min")]
    pub lambda_min: Option<f64>,
    /// Keep only eigenvalues <= this value
    #[arg(long = "lambda-max")]
    pub lambda_max: Option<f64>,
    /// Potential expression in n
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long = "A")]
    pub coulomb_a: Option<f64>,
    #[arg(long = "l")]
    pub angular_l: Option<u32>,
    /// Right endpoint of the grid (boundary condition x(b) = 0)
    #[arg(long)]
    pub b: Option<i64>,
    /// Number of theta samples over (0, pi) (default 256, minimum 16)
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub precision: Option<usize>,
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Spectral parameter; omit to run all four published configurations
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Forcing expression; omit to run all four published configurations
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub precision: Option<usize>,
    #[arg(long)]
    pub output: Option<String>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Run only groups whose name contains this string
    #[arg(long)]
    pub group: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => commands::cmd_solve(args),
        Command::Scan(args) => commands::cmd_scan(args),
        Command::CompareTables(args) => commands::cmd_compare_tables(args),
        Command::Verify(args) => commands::cmd_verify(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerifyFailed(failed)) => {
            eprintln!("error: {failed} property group(s) failed");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
