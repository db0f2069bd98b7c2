use thiserror::Error;

use crate::linalg::Field;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("not a quiver rank array: {0}")]
    InvalidRankArray(String),

    #[error("block rank matrix is not in the image of the Zelevinsky map: {0}")]
    NotInImage(String),

    #[error("invalid block rank matrix: {0}")]
    InvalidBlockRanks(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("representation is outside the open locus: {0}")]
    NotInOpenLocus(String),

    #[error("enumeration guard exceeded: {what} needs {needed}, ceiling is {ceiling}")]
    GuardExceeded {
        what: &'static str,
        needed: u128,
        ceiling: u128,
    },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
