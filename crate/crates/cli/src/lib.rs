//! `mixlab` — a command-line laboratory for exact mixing diagnostics of
//! algebraic shift systems over prime fields, and for unit-equation searches
//! on the arithmetic side.
//!
//! The binary is a thin shell around [`run_main`]; everything observable —
//! flag validation, config-file merging, report rendering, exit codes — lives
//! in this library so tests can drive it in-process.
//!
//! Exit codes: `0` success, `1` input error, `2` work-bound breach.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

pub mod config;
pub mod parse;
pub mod report;
pub mod run;

pub use config::{resolve, Cli, CommandSpec, OutputFormat, RunConfig};
pub use run::{run, RunOutcome};

/// Everything that can go wrong between argv and a rendered report.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or missing input: flags, config keys, grammar errors.
    #[error("{0}")]
    Input(String),
    /// A work bound refused the requested computation.
    #[error("{0}")]
    WorkBound(String),
    /// An engine rejected the inputs or breached its own bounds.
    #[error(transparent)]
    Engine(#[from] mixlab_core::Error),
    #[error("cannot use {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn input(msg: String) -> Self {
        CliError::Input(msg)
    }

    /// Maps the failure onto the process exit convention.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::WorkBound(_) => 2,
            CliError::Engine(
                mixlab_core::Error::WorkBoundExceeded { .. }
                | mixlab_core::Error::WindowTooLarge { .. },
            ) => 2,
            _ => 1,
        }
    }
}

/// Reads `MIXLAB_THREADS` and sizes the global worker pool accordingly.
/// Unset means the library default; a set value must be a positive integer.
fn configure_threads() -> Result<(), CliError> {
    let Some(raw) = std::env::var_os("MIXLAB_THREADS") else {
        return Ok(());
    };
    let text = raw.to_string_lossy();
    let count: usize = text.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::input(format!(
            "MIXLAB_THREADS must be a positive integer, got `{text}`"
        ))
    })?;
    // A second initialization (e.g. from tests sharing a process) is fine:
    // the pool size is already pinned.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(count)
        .build_global();
    Ok(())
}

/// Full command-line entry: parses argv (without the program name), runs the
/// command, writes the report to stdout or `--out`, and returns the exit
/// code. All failures are reported on stderr.
pub fn run_main(args: Vec<OsString>) -> i32 {
    if let Err(e) = configure_threads() {
        eprintln!("mixlab: {e}");
        return 1;
    }
    let cli = match Cli::try_parse_from(std::iter::once(OsString::from("mixlab")).chain(args)) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors"; keep their exit 0.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve(cli) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("mixlab: {e}");
            return e.exit_code();
        }
    };
    let outcome = run(&config);
    if let Some(report) = &outcome.report {
        match &config.out {
            Some(path) => {
                if let Err(source) = std::fs::write(path, report) {
                    eprintln!("mixlab: cannot use {}: {source}", path.display());
                    return 1;
                }
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(report.as_bytes()).is_err() {
                    return 1;
                }
            }
        }
    }
    if let Some(message) = &outcome.error {
        eprintln!("mixlab: {message}");
    }
    outcome.exit_code
}
