//! Command-line front end: argument model, commands and output plumbing.

pub mod args;
pub mod commands;
pub mod output;

use thiserror::Error;

pub use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_NOT_UNITARY: i32 = 2;
pub const EXIT_NUMERIC_FAILURE: i32 = 3;
pub const EXIT_VERIFICATION_FAILED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] eub_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(eub_core::Error::NotUnitary { .. }) => EXIT_NOT_UNITARY,
            CliError::Core(eub_core::Error::NumericFailure(_)) => EXIT_NUMERIC_FAILURE,
            CliError::Core(_) | CliError::Io { .. } | CliError::Argument(_) => EXIT_INVALID_INPUT,
        }
    }
}

/// What a command produced: the artifact text and whether it certified.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Self { text, passed: true }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_OK
        } else {
            EXIT_VERIFICATION_FAILED
        }
    }
}

/// Runs a parsed command, writing its artifact to `--out` or stdout.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let out = cli.command.out().cloned();
    let outcome = commands::dispatch(cli.command)?;
    output::emit(&outcome.text, out.as_deref())?;
    Ok(outcome)
}
