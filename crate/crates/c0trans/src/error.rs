//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by geometry, certification, refutation, and scene I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Two points, maps, or cycles live in different ambient dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two maps that must share a domain triangulation do not.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A simplex, complex, or cycle violates a structural invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A stated precondition does not hold (e.g. a dimension gate).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A randomized search ran out of retries; never silently degraded.
    #[error("retry budget exhausted: {0}")]
    RetryBudget(String),

    /// Text or JSON input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    /// A scene file violates the schema.
    #[error("scene error: {0}")]
    Scene(String),

    /// An invariant the library itself guarantees was found violated.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
