use thiserror::Error;

use crate::simplicial::StratumKey;

/// Errors raised by the combinatorial engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("cell {cell} escapes the truncation (max_dim {max_dim}, max_length {max_length})")]
    OutOfScope {
        cell: String,
        max_dim: usize,
        max_length: usize,
    },

    #[error("stratum (dim {}, length {}) has {size} cells, over the limit of {limit}", .stratum.dim, .stratum.length)]
    ResourceLimit {
        stratum: StratumKey,
        size: u128,
        limit: u128,
    },

    #[error("flow did not stabilize after {iterations} iterations; last iterates: {orbit:?}")]
    IterationCap {
        iterations: usize,
        orbit: Vec<String>,
    },

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("self-check failed: {0}")]
    SelfCheck(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = MorseError> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> MorseError {
    MorseError::Domain(msg.into())
}
