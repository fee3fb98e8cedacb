use thiserror::Error;

use crate::contraction::IterationTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("point outside domain: {0}")]
    Domain(String),

    #[error("no convergence after {} iterations (last step {:.3e})", .trace.steps(), .trace.last_distance())]
    NonConvergence { trace: Box<IterationTrace> },

    #[error("malformed field table: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Self::InvalidArgument(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Self::Dimension(msg.into())
    }
}
