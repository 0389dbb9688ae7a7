//! `semirandom` — experiment harness for the semi-random matching process.
//!
//! Subcommands:
//! * `simulate`   — run seeded simulations, export trajectories, compare to
//!   the ODE predictions;
//! * `bounds`     — compute the lower/upper bound constants from the ODE lab;
//! * `lowerbound` — sweep the counting certificate along a uniform-circle run;
//! * `verify`     — check an exported run: perfect matching + certificate.
//!
//! Exit codes: 0 success, 2 configuration error, 3 runtime failure,
//! 4 assertion failure (`--assert` mode).

mod commands;
mod config;
mod io;
mod pool;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "semirandom",
    version,
    about = "semi-random graph process laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded simulations and export trajectories.
    Simulate(commands::simulate::SimulateArgs),
    /// Compute the bound constants (alpha, beta, phase times).
    Bounds(commands::bounds::BoundsArgs),
    /// Certificate sweep under the uniform-circle strategy.
    Lowerbound(commands::lowerbound::LowerboundArgs),
    /// Verify an exported arc list and matching.
    Verify(commands::verify::VerifyArgs),
}

/// Outcome of a command: exit code 0 or 4 (`--assert` failures).
pub(crate) enum CmdOutcome {
    Ok,
    AssertFailed(String),
}

/// Configuration errors exit with code 2.
#[derive(Debug)]
pub(crate) struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Bounds(args) => commands::bounds::run(args),
        Command::Lowerbound(args) => commands::lowerbound::run(args),
        Command::Verify(args) => commands::verify::run(args),
    };
    let code = match result {
        Ok(CmdOutcome::Ok) => 0,
        Ok(CmdOutcome::AssertFailed(msg)) => {
            eprintln!("assertion failed: {msg}");
            4
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<ConfigError>().is_some() {
                2
            } else {
                3
            }
        }
    };
    std::process::exit(code);
}
