//! `qamp` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when the model or
//! its assumptions reject the input.

mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Common};
use qamp_core::QampError;

pub const SEED_ENV: &str = "QAMP_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] QampError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_model_error() => 2,
            _ => 1,
        }
    }
}

fn resolve_seed(common: &Common) -> Result<u64, CliError> {
    if let Some(seed) = common.seed {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={text:?} is not a u64"))),
        Err(_) => Ok(0),
    }
}

fn run(command: &Command) -> Result<(), CliError> {
    let common = match command {
        Command::Grover(a) => &a.common,
        Command::Count(a) => &a.common,
        Command::Qae(a) => &a.common,
        Command::Qmc(a) => &a.common,
        Command::CreditRisk(a) => &a.common,
        Command::Bench(a) => &a.common,
    };
    if let Some(out) = &common.out {
        if out.extension().is_some_and(|e| e == "json") {
            return Err(CliError::Usage(
                "--out names the CSV file; the JSON summary is written beside it".into(),
            ));
        }
    }
    let seed = resolve_seed(common)?;
    let report = match command {
        Command::Grover(a) => commands::grover(a, seed)?,
        Command::Count(a) => commands::count(a, seed)?,
        Command::Qae(a) => commands::qae(a, seed)?,
        Command::Qmc(a) => commands::qmc(a, seed)?,
        Command::CreditRisk(a) => commands::credit_risk(a, seed)?,
        Command::Bench(a) => commands::bench(a, seed)?,
    };
    println!("{}", report.line);
    if let Some(out) = &common.out {
        output::write_report(&report, out)?;
    }
    Ok(())
}

fn main_with_args(argv: impl IntoIterator<Item = OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn main() -> ExitCode {
    main_with_args(std::env::args_os())
}
