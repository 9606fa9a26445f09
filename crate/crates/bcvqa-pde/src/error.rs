//! Error type for problem validation, the reference solver and the metrics.

use thiserror::Error;

/// Failures of problem validation, linear solves and error measures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PdeError {
    /// The problem specification violates an invariant.
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    /// A linear system had a zero pivot.
    #[error("singular system at row {row}")]
    Singular {
        /// Row of the vanishing pivot.
        row: usize,
    },
    /// Two vectors that must match in length do not.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch {
        /// Expected length.
        expected: usize,
        /// Actual length.
        got: usize,
    },
    /// A vector that must be normalizable has zero norm.
    #[error("zero-norm vector")]
    ZeroNorm,
    /// An average over an empty series was requested.
    #[error("empty series")]
    Empty,
}
