use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("exponent {0} must lie strictly inside (1, inf)")]
    InvalidExponent(f64),

    #[error("norm is not evaluable in closed form: {0}")]
    NotEvaluable(String),

    #[error("norm is not differentiable: {0}")]
    NotDifferentiable(String),

    #[error("A^T A is not irreducible")]
    GramReducible,

    #[error("A x = 0 for the current iterate")]
    ZeroImage,

    #[error("starting vector must be strictly positive")]
    NonPositiveStart,

    #[error("no contraction certificate: tau = {tau} >= 1 (use force to iterate anyway)")]
    NotCertified { tau: f64 },

    #[error("the reversibilized chain K + K* is reducible")]
    ReducibleChain,

    #[error("kernel is not row-stochastic: {0}")]
    NotStochastic(String),

    #[error("stationary distribution rejected: {0}")]
    BadStationary(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
