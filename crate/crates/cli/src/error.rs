use std::path::PathBuf;

use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("check failed: {0}")]
    Check(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(gibbsfield::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 2,
            CliError::Config(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<gibbsfield::Error> for CliError {
    fn from(e: gibbsfield::Error) -> Self {
        match e {
            gibbsfield::Error::InvalidArgument(msg) => CliError::Config(msg),
            gibbsfield::Error::InsufficientEvents { total } => {
                CliError::Check(format!("no sample out of {total} passed the event checks"))
            }
            other => CliError::Numerical(other),
        }
    }
}
