use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// A verification or agreement check failed.
pub const EXIT_VERIFY: i32 = 1;
/// Input parameters are infeasible or out of range.
pub const EXIT_INFEASIBLE: i32 = 2;
/// Reading, writing or parsing a file failed.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Infeasible(_) | CliError::Invalid(_) => EXIT_INFEASIBLE,
            CliError::Io { .. } | CliError::Parse(_) => EXIT_IO,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<evac_core::Error> for CliError {
    fn from(err: evac_core::Error) -> Self {
        use evac_core::Error as E;
        match err {
            E::Infeasible(msg) => CliError::Infeasible(msg.to_string()),
            E::InvalidStrategy(_) => CliError::Parse(err.to_string()),
            E::NonConvergence { .. } => CliError::Verification(err.to_string()),
            _ => CliError::Invalid(err.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
