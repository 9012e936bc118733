//! `overlapdim`: dimensions of the self-similar measures of `{ax, bx, cx + 1 - c}`.
//!
//! Every subcommand prints one JSON document on stdout; `sweep` also writes a
//! CSV file. Diagnostics go to stderr. Exit codes: 0 success, 2 invalid input,
//! 3 I/O failure, 4 too few samples. `OVERLAPDIM_THREADS` caps the worker
//! count (0 or unset: all cores).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("OVERLAPDIM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Validation(format!("OVERLAPDIM_THREADS must be a non-negative integer, got {raw:?}"))
    })?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("cannot start {n} worker threads: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::DimMeasure(a) => commands::dim_measure(a),
        Command::DimAttractor(a) => commands::dim_attractor(a),
        Command::CheckSeparation(a) => commands::check_separation(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Phi(a) => commands::phi(a),
        Command::Estimate(a) => commands::estimate(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|doc| Ok(serde_json::to_string_pretty(&doc)?)) {
        Ok(text) => match writeln!(std::io::stdout().lock(), "{text}") {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write to stdout: {e}");
                ExitCode::from(error::EXIT_IO as u8)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
