use thiserror::Error;

/// Errors raised by constructions and computations.
///
/// Failed verifications are not errors: they are reported as content of the
/// corresponding report types.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("{value}! is not invertible in characteristic {p}")]
    FactorialNotInvertible { value: u32, p: u32 },

    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("vector is not in the expected subspace: {0}")]
    NotInSubspace(String),

    #[error("decomposition invalid: {0}")]
    Decomposition(String),

    #[error("conditions failed: {0}")]
    ConditionsFailed(String),

    #[error("homomorphism check failed: {0}")]
    NotHomomorphism(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
