//! `lambda-pt`: spectra, metrics, threshold sweeps, and population dynamics
//! of a dissipative three-level Λ system from the command line.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 metric requested at an exceptional point, 4 numerical overflow.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

mod commands;
mod config;
mod output;
mod validate;

use output::OutputFormat;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    ExceptionalPoint(String),
    #[error("{0}")]
    Overflow(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::ExceptionalPoint(_) => 3,
            CliError::Overflow(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "lambda-pt",
    version,
    about = "Three-level Λ-system toolkit: PT phase diagram, metric construction, level dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a configuration field, e.g. `--set pt.v=0.025`. Repeatable;
    /// applied in order after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output file (directory for `fig2`); stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Corrupt an intermediate quantity to prove the suite catches it.
    #[arg(long, value_name = "NAME", hide = true)]
    inject_fault: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues, PT phase, and metric of one parameter point.
    Spectrum(CommonArgs),
    /// Time evolution of level amplitudes and populations.
    Evolve(CommonArgs),
    /// Sweep v or gamma_pt across the PT-breaking threshold.
    Sweep(CommonArgs),
    /// Run the built-in invariant suite and report pass/fail per check.
    Validate(ValidateArgs),
    /// Write the two bundled population-dynamics datasets (fig2a.csv, fig2b.csv).
    Fig2(CommonArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(args) => {
            let cfg = config::load(args.config.as_deref(), &args.set)?;
            commands::cmd_spectrum(&cfg, args.format, args.out.as_deref())
        }
        Command::Evolve(args) => {
            let cfg = config::load(args.config.as_deref(), &args.set)?;
            commands::cmd_evolve(&cfg, args.format, args.out.as_deref())
        }
        Command::Sweep(args) => {
            let cfg = config::load(args.config.as_deref(), &args.set)?;
            commands::cmd_sweep(&cfg, args.format, args.out.as_deref())
        }
        Command::Validate(args) => {
            let cfg = config::load(args.common.config.as_deref(), &args.common.set)?;
            validate::cmd_validate(&cfg, args.inject_fault.as_deref())
        }
        Command::Fig2(args) => commands::cmd_fig2(args.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
