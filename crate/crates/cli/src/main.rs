//! `gmix`: experiments for Gaussian-mixture approximation of curvelet expansions.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Guard(String),
    Io(String),
}

impl From<gmix::Error> for CliError {
    fn from(e: gmix::Error) -> Self {
        if e.is_guard() {
            CliError::Guard(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Guard(_) => 2,
            _ => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Guard(m) => write!(f, "numerical guard: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gmix", version, about = "Gaussian-mixture approximation of sparse curvelet expansions")]
pub struct Cli {
    /// key = value configuration file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for artifacts
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Store wall-clock timings in artifacts (otherwise written as 0)
    #[arg(long, global = true)]
    record_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Partition-of-unity sweep, optionally with a tight-frame check
    FrameCheck(commands::FrameCheckArgs),
    /// Sub-budget plan
    Budget(commands::BudgetArgs),
    /// Gaussian approximation of a scale generator
    GenApprox(commands::GenApproxArgs),
    /// Gaussian approximation of one curvelet
    CurveletApprox(commands::CurveletApproxArgs),
    /// Full scheme on a coefficient file
    Approx(commands::ApproxArgs),
    /// Error rates over a list of budgets
    Rate(commands::RateArgs),
    /// Star-norm, sector, rho, separation and row-sum audit
    BesselAudit(commands::AuditArgs),
    /// Print the version
    Version,
}

fn init_threads() -> Result<(), CliError> {
    let n = match std::env::var("GMIX_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Invalid(format!("GMIX_THREADS must be a count, got {v:?}")))?,
        Err(_) => 0,
    };
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Invalid(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match init_threads().and_then(|_| commands::run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gmix: {e}");
            ExitCode::from(e.code())
        }
    }
}
