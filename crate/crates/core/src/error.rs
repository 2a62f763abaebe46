use thiserror::Error;

/// Errors raised by the exponential-family machinery, the measures and the oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid source parameter for {family}: {reason}")]
    InvalidSourceParam { family: String, reason: String },

    #[error("family mismatch: {left} vs {right}")]
    FamilyMismatch { left: String, right: String },

    #[error("natural parameter outside the domain: {0}")]
    DomainViolation(String),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{0} has a non-zero carrier term; the likelihood-ratio form does not apply")]
    CarrierNotZero(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {0:?} is outside the support")]
    OutsideSupport(Vec<f64>),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle did not converge: estimate {estimate:e} with error bound {error:e}")]
    NotConverged { estimate: f64, error: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
