//! Error type shared by every module of the crate.

use thiserror::Error;

/// All failure modes of the library.
///
/// [`Error::is_internal`] separates "the caller handed us something bad"
/// (parameters, files, shapes) from "a structural guarantee of the
/// construction was violated", which signals a bug and maps to a distinct
/// process exit code in the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested field order is not a prime number.
    #[error("{0} is not prime; the field order must be a prime")]
    NotPrime(u64),

    /// A value outside the canonical residue range [0, q) was supplied.
    /// Out-of-range values are rejected rather than reduced silently.
    #[error("value {value} is not a canonical residue modulo {q}")]
    NotCanonical { value: u64, q: u64 },

    /// Two operands belong to fields of different order.
    #[error("field mismatch: operands live in F_{0} and F_{1}")]
    SpecMismatch(u64, u64),

    /// Multiplicative inverse of zero.
    #[error("division by zero in F_{0}")]
    DivisionByZero(u64),

    /// A square system had no unique solution. Carries the rank that
    /// elimination reached before stalling.
    #[error("singular matrix: rank {rank} out of {dim}")]
    SingularMatrix { rank: usize, dim: usize },

    /// Matrix or vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An argument violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A line needs a nonzero coefficient on x or y.
    #[error("degenerate line: the x and y coefficients are both zero")]
    DegenerateLine,

    /// The two lines are parallel (or equal) and never meet.
    #[error("lines are parallel or equal; no intersection")]
    NoIntersection,

    /// A proposed line/point family breaks a configuration invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    /// Rejection sampling did not find a family in general position
    /// within its attempt budget.
    #[error("configuration generation failed after {0} attempts")]
    GenerationFailure(u32),

    /// An exhaustive enumeration would exceed the safety guard.
    #[error("enumeration of size {size} exceeds the guard {guard}")]
    TooLarge { size: u128, guard: u128 },

    /// The operation is not defined for this input (e.g. it needs a
    /// grid-built code).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A structural guarantee of the construction failed. This means a
    /// bug, not bad input.
    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed code file: {0}")]
    Json(#[from] serde_json::Error),

    /// A vector file did not parse as a single CSV line of integers.
    #[error("malformed vector file: {0}")]
    ParseVector(String),
}

impl Error {
    /// True when the error indicates a violated structural guarantee
    /// rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
