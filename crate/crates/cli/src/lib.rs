//! Command-line front end for the `nlmc_core` library.
//!
//! Each subcommand loads JSON shape and kernel specs (a file path or inline
//! JSON), runs one computation and writes a table as CSV or JSON. CSV output
//! starts with `#` metadata lines, has one row per point or direction and
//! ends with a `#` line holding a JSON summary. Output contains no
//! timestamps, so identical inputs give identical bytes.
//!
//! Exit codes: 0 on success, 1 when a limit did not converge (the table is
//! still written) or a numerical failure occurred, 2 on input errors.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

pub use args::{Cli, Command, Format};

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "NLMC_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl From<nlmc_core::Error> for CliError {
    fn from(e: nlmc_core::Error) -> Self {
        match e {
            nlmc_core::Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Rendered output of a command. `converged` is false when the run should
/// exit with code 1 despite producing output.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    pub converged: bool,
    pub warning: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.converged {
            0
        } else {
            1
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // the global pool can only be built once per process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a parsed command without writing anything.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    configure_threads()?;
    match &cli.command {
        Command::KernelCheck(a) => commands::kernel_check(a),
        Command::Profile(a) => commands::profile(a),
        Command::TangentDeriv(a) => commands::tangent_deriv(a),
        Command::MovingPlanes(a) => commands::moving_planes(a),
        Command::Counterexample(a) => commands::counterexample(a),
    }
}

/// Parses `args`, runs the command, writes its output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.text)
            .map_err(|e| CliError::Input(format!("cannot write `{}`: {e}", path.display()))),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    if let Some(w) = &outcome.warning {
        eprintln!("warning: {w}");
    }
    outcome.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_exit_codes() {
        let input: CliError = nlmc_core::Error::Spec("bad".into()).into();
        assert_eq!(input.exit_code(), 2);
        let num: CliError = nlmc_core::Error::Numerical("stalled".into()).into();
        assert_eq!(num.exit_code(), 1);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["nlmc", "profile"]), 2);
        assert_eq!(run(["nlmc", "no-such-command"]), 2);
    }
}
