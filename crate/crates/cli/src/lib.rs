//! Command-line harness: instance generation, solving, ratio experiments,
//! reduction checks and validation.

pub mod args;
pub mod commands;
pub mod error;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use redblue::Weight;

use args::{Cli, Command};
use error::CliError;

/// Six-digit decimal rendering of an exact value.
pub fn decimal(w: &Weight) -> String {
    redblue::weight::decimal(w.as_rational())
}

/// Parses `argv` and runs the command, returning the process exit code:
/// 0 success, 1 usage error, 2 validation failure, 3 bound violation.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => commands::gen::run(a, out),
        Command::Solve(a) => commands::solve::run(a, out),
        Command::Experiment(a) => commands::experiment::run(a, out),
        Command::VerifyReduction(a) => commands::verify::run(a, out),
        Command::Validate(a) => commands::validate::run(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let label = match e {
                CliError::Usage(_) => "usage",
                CliError::Validation(_) => "error",
                CliError::BoundViolation(_) => "bound violation",
            };
            let _ = writeln!(err, "{label}: {e}");
            e.exit_code()
        }
    }
}
