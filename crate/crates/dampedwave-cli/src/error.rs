//! Failure classes mapped to process exit codes: bad configuration is
//! distinguishable from a numerical failure by the caller.

use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or invalid configuration; nothing was computed. Exit 2.
    #[error("configuration error: {0}")]
    Config(String),

    /// A module rejected the run mid-computation. Exit 3.
    #[error("numerical failure: {0}")]
    Numerical(#[from] dampedwave::Error),

    /// Artifact writing failed. Exit 1.
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
