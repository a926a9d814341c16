//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Matrix or group-element dimensions do not match.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix that must be inverted is numerically singular.
    #[error("matrix is numerically singular (smallest pivot {pivot:.3e})")]
    Singular { pivot: f64 },

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A point fails the Siegel-Jacobi space invariants.
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// A group element or generator letter fails its invariants.
    #[error("invalid group element: {0}")]
    InvalidElement(String),

    /// The truncated lattice sum would need more terms than the budget.
    #[error(
        "lattice sum needs more than {budget} terms at the requested tolerance; \
         reduce the point first (argument reduction brings the term count down)"
    )]
    BudgetExceeded { budget: u64 },

    /// Integer matrix arithmetic overflowed 64-bit entries.
    #[error("integer overflow in exact matrix arithmetic")]
    IntegerOverflow,

    /// The theta value exceeds the double-precision range; the logarithmic
    /// evaluator still works there.
    #[error("theta value exceeds the f64 range (log magnitude ~ {log_magnitude:.3e}); use the log evaluator")]
    ValueOverflow { log_magnitude: f64 },

    /// The theta value at the base point is too small to divide by.
    #[error("theta value too small for reliable division (|theta| = {magnitude:.3e}); retry at another point")]
    ThetaTooSmall { magnitude: f64 },

    /// Input could not be parsed or validated.
    #[error("parse error: {0}")]
    Parse(String),
}
