//! Operator surface for the simulator: single runs, seeded batches, the
//! performance benchmark, log analysis, and plot-ready SVG export.
//!
//! Exit codes: 0 on success, 2 for invalid configuration or unusable input,
//! 3 for I/O failures.

pub mod args;
pub mod commands;
pub mod error;

use std::process::ExitCode;

use clap::Parser;

pub use args::Cli;
pub use error::CliError;

/// Parses arguments and dispatches; the binary's whole body.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
