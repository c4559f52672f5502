//! Command-line front end: argument handling, dispatch and deterministic emission.

pub mod args;
mod commands;
pub mod config;
pub mod emit;

use clap::Parser;
use thiserror::Error;

use crate::args::Cli;
use crate::config::RunConfig;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Computation(String),
}

impl From<bhlab_core::Error> for CliError {
    fn from(e: bhlab_core::Error) -> Self {
        use bhlab_core::Error as E;
        match e {
            E::InvalidParameter(_) | E::Domain(_) | E::UnsupportedRing(_) => CliError::Usage(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<bhlab_oracle::OracleError> for CliError {
    fn from(e: bhlab_oracle::OracleError) -> Self {
        use bhlab_oracle::OracleError as E;
        match e {
            E::Exact(inner) => inner.into(),
            E::InvalidParameter(_) | E::Unsupported(_) => CliError::Usage(e.to_string()),
            E::Conditioning(_) => CliError::Computation(e.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Computation(_) => EXIT_COMPUTATION,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `argv` (including the program name), run, and render.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = RunConfig::resolve(&cli.flags)
        .and_then(|cfg| commands::dispatch(&cli.command, &cfg).map(|em| (em, cfg.out)));
    match result {
        Ok((em, format)) => {
            let code = match em.verdict {
                Some(false) => EXIT_CHECK_FAILED,
                _ => EXIT_PASS,
            };
            Outcome { code, stdout: em.render(format), stderr: String::new() }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
