//! Command-line surface: configuration, element files, verification suites
//! and the subcommands.

pub mod commands;
pub mod config;
pub mod serialize;
pub mod verify;

use thiserror::Error;

pub use commands::run;
pub use config::{OutputFormat, RunConfig};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a verification suite fails.
pub const EXIT_VERIFY: i32 = 1;
/// Exit status for usage, parse and I/O errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}
