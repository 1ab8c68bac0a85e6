//! Experiment driver: reads a `key = value` config, runs one computation and
//! writes a TSV report.
//!
//! Exit codes: `0` success, `1` usage or config error (or a failed
//! `verify`), `2` when a requested constant did not converge. The report is
//! written in every case except `1`.

mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

pub use config::Config;

#[derive(Parser)]
#[command(
    name = "wcauchy",
    version,
    about = "Weighted Cauchy product experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// `key = value` config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination; `-` is standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients of f ⋄ g (or f ⋄ᵢ g when i > 0).
    Product(Io),
    /// Coefficients of the inverse of f.
    Invert(Io),
    /// Condition constants selected by q, (M, k), N and imax.
    Conditions(Io),
    /// Induced-norm bounds of M_f and of shift powers.
    Opnorm(Io),
    /// Finite-rank approximation error against the analytic bound.
    Compactness(Io),
    /// Krylov echelon, cyclicity and closed-ideal index of f.
    Krylov(Io),
    /// Gelfand value of f and spectrum membership of lambda.
    Spectrum(Io),
    /// Invariant suite over the fixture families.
    Verify(Io),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

fn dispatch(command: &Command) -> Result<(commands::Outcome, &Io)> {
    let load = |io: &Io| -> Result<Config> {
        io.config
            .as_deref()
            .map_or_else(|| Ok(Config::default()), Config::load)
    };
    Ok(match command {
        Command::Product(io) => (commands::product(&load(io)?)?, io),
        Command::Invert(io) => (commands::invert_cmd(&load(io)?)?, io),
        Command::Conditions(io) => (commands::conditions(&load(io)?)?, io),
        Command::Opnorm(io) => (commands::opnorm(&load(io)?)?, io),
        Command::Compactness(io) => (commands::compactness(&load(io)?)?, io),
        Command::Krylov(io) => (commands::krylov(&load(io)?)?, io),
        Command::Spectrum(io) => (commands::spectrum(&load(io)?)?, io),
        Command::Verify(io) => {
            load(io)?;
            (commands::verify()?, io)
        }
    })
}

fn emit(text: &str, out: &str) -> Result<()> {
    if out == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(text.as_bytes())?;
        stdout.flush()?;
    } else {
        std::fs::write(out, text).with_context(|| format!("cannot write {out}"))?;
    }
    Ok(())
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = dispatch(&cli.command).and_then(|(outcome, io)| {
        emit(&outcome.table.render(), &io.out)?;
        Ok(outcome)
    });
    match result {
        Ok(o) if o.failed => {
            eprintln!("error: verification failed");
            EXIT_USAGE
        }
        Ok(o) if !o.converged => {
            eprintln!("warning: a requested constant did not converge");
            EXIT_NOT_CONVERGED
        }
        Ok(_) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
