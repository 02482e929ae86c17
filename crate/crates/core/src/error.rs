use thiserror::Error;

use crate::triangulate::LatticeStats;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix order {0} is out of range (supported: 1..=8)")]
    OrderOutOfRange(usize),

    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("invalid permutation of length {0}")]
    InvalidPermutation(usize),

    #[error("face text, line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("not a face: {0}")]
    InvalidFace(String),

    #[error("record budget of {cap} exceeded while building dimension {dim}")]
    BudgetExceeded {
        cap: usize,
        dim: u32,
        stats: LatticeStats,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
