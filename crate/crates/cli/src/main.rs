//! `twdp`: reproducible, file-emitting front end to `twdp-core`.
//!
//! Exit codes: 0 success, 2 argument, domain or configuration error,
//! 3 numerical failure.

mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn exit_code(e: &anyhow::Error) -> u8 {
    let numeric = e
        .chain()
        .filter_map(|c| c.downcast_ref::<twdp_core::Error>())
        .any(twdp_core::Error::is_numeric);
    if numeric {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

fn main() -> ExitCode {
    let argv = match config::expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {} failed: {e:#}", cli.command.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
