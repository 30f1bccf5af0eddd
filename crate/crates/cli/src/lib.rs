//! Command-line front end for `tropmod`: input documents, commands with
//! text and JSON reports, and SVG rendering.
//!
//! Exit status: 0 on success, 1 on a domain error, 2 on a parse or usage
//! error, 3 when a verification fails.

pub mod commands;
pub mod model;
pub mod render;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

pub use commands::{Cli, CliError, Report};

/// Parses arguments, runs the command and prints its report.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    match commands::run(&cli) {
        Ok(report) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("serializable"))
            } else {
                write!(out, "{}", report.text)
            };
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", serde_json::json!({"error": e.to_string(), "exit": e.exit_code()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
