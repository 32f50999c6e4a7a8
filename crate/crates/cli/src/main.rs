//! `fockgerbe` command-line front end.

mod checks;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fockgerbe::Error;

#[derive(Parser, Debug)]
#[command(name = "fockgerbe", version, about = "Fock representations, implementers and bundle-gerbe cocycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON input for the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized suites, recorded in every output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Frequency cutoff Q.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// Fock degree cap D.
    #[arg(long, global = true)]
    degree: Option<usize>,
    /// Sample count (random trials for `check`, equator samples for `hopf`).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat truncation leakage and degenerate points as errors.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run invariant suites.
    Check {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Implementer of the multiplication operator of a loop (`--config` holds its Fourier coefficients).
    Implementer,
    /// Dixmier-Douady cocycle of phase sections over a cover.
    Dd,
    /// Suspension chase of a cochain in either direction.
    Suspend,
    /// The Hopf experiment.
    Hopf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Clifford,
    Modes,
    Torsor,
    Cech,
    Geom,
    All,
}

/// Exit codes: 0 ok, 1 assertion failure, 2 usage or config, 3 numerical
/// non-convergence.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NonConverged(_)
        | Error::Refine(_)
        | Error::DegenerateSolution(_)
        | Error::DegeneratePoint(_)
        | Error::SingularC(_)
        | Error::TooFar(_) => 3,
        _ => 2,
    }
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("FOCKGERBE_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| format!("FOCKGERBE_THREADS={v:?} is not a thread count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match &cli.command {
        Command::Check { suite } => Ok(checks::run(*suite, &cli)),
        Command::Implementer => commands::implementer(&cli),
        Command::Dd => commands::dd(&cli),
        Command::Suspend => commands::suspend(&cli),
        Command::Hopf => commands::hopf(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
