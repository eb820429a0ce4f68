//! Command-line front end: spiral benchmark, score calibration, decision
//! and evaluation on score files, and dataset export.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 success with a
//! non-convergence warning.

mod commands;

use clap::error::ErrorKind;
use clap::Parser;
use commands::{AppError, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(warned) => {
            if warned {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
