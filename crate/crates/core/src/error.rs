//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("bounds violated: {0}")]
    BoundsViolation(String),

    #[error("cannot certify objective gap: reference objective is zero")]
    ZeroReference,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("solver diverged: {0}")]
    Diverged(String),

    #[error("solver stalled: {0}")]
    Stalled(String),

    #[error("infeasible input: {0}")]
    InfeasibleInput(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("all rounding repetitions failed ({0} attempts)")]
    AllRepetitionsFailed(usize),

    #[error("oracle failed: {0}")]
    OracleFailure(String),

    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
