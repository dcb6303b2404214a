use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RdcError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible bounds: {0}")]
    Infeasible(String),

    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("instance too large for exhaustive search: {free} free channel parameters (max {max})")]
    InstanceTooLarge { free: usize, max: usize },

    #[error("no plateau detected: {0}")]
    NoPlateau(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = RdcError> = std::result::Result<T, E>;

impl RdcError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RdcError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        RdcError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}
