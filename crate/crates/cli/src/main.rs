#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::Context;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl From<qbgeom_core::Error> for CliError {
    fn from(e: qbgeom_core::Error) -> Self {
        use qbgeom_core::Error as E;
        match e {
            E::Domain(_) | E::Stability { .. } => CliError::Usage(e.to_string()),
            E::Io(_) | E::Csv(_) | E::Json(_) => CliError::Io(e.to_string()),
        }
    }
}

const EXIT_VALIDATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

fn run(cli: &Cli) -> Result<bool, CliError> {
    let ctx = Context::new(&cli.common)?;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(&ctx, a).map(|_| true),
        Command::Sweep(a) => commands::sweep(&ctx, a).map(|_| true),
        Command::Figure(a) => commands::figure(&ctx, a).map(|_| true),
        Command::Validate(a) => commands::validate(&ctx, a),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on malformed arguments
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VALIDATION),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
