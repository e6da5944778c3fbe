//! `curve-mates`: synthesize Frenet curves in ℝ³, SO(3) or S³ from κ and τ,
//! build their natural and conjugate mates, classify them and check the
//! mate theorems numerically.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use curve_mates::Error;

use config::CommonArgs;

#[derive(Debug, Parser)]
#[command(name = "curve-mates", version, about)]
struct Cli {
    /// Print the default tolerance table and exit.
    #[arg(long)]
    show_tolerances: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate frames and positions; writes a CSV trajectory.
    Synthesize {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Natural or conjugate mate as CSV, analytic and/or reconstructed.
    Mate {
        #[command(flatten)]
        common: CommonArgs,
        /// natural or conjugate
        #[arg(long)]
        kind: Option<String>,
        /// analytic, geometric or both
        #[arg(long)]
        mode: Option<String>,
        /// Where to write the comparison summary in `both` mode (standard error if absent).
        #[arg(long)]
        summary: Option<std::path::PathBuf>,
    },
    /// Special-curve verdicts as JSON.
    Classify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check theorems on the profile; JSON report, exit 1 on any failure.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated theorem ids (default: all).
        #[arg(long, value_delimiter = ',')]
        theorems: Option<Vec<String>>,
        /// analytic, geometric or both
        #[arg(long)]
        mode: Option<String>,
        /// Write per-sample residuals as CSV (theorem,s,residual).
        #[arg(long)]
        trace: Option<std::path::PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                Error::Parse(_) | Error::FrenetViolation { .. } | Error::InvalidArgument(_) => 2,
                Error::NotAFrenetMate { .. } => 4,
                _ => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(Error::NotAFrenetMate { zeros }) => {
                let listed = if zeros.is_empty() {
                    "none (identically zero)".to_string()
                } else {
                    zeros.iter().map(|z| format!("{z}")).collect::<Vec<_>>().join(", ")
                };
                format!("{}\nzero crossings of tau - tau_G: {listed}", self)
            }
            _ => self.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match (cli.show_tolerances, cli.command) {
        (true, _) => commands::show_tolerances(),
        (false, None) => Err(CliError::Config(
            "no command given (expected synthesize, mate, classify or verify)".into(),
        )),
        (false, Some(Command::Synthesize { common })) => commands::synthesize(&common),
        (false, Some(Command::Mate {
            common,
            kind,
            mode,
            summary,
        })) => commands::mate(&common, kind.as_deref(), mode.as_deref(), summary.as_deref()),
        (false, Some(Command::Classify { common })) => commands::classify(&common),
        (false, Some(Command::Verify {
            common,
            theorems,
            mode,
            trace,
        })) => commands::verify(&common, theorems, mode.as_deref(), trace.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
