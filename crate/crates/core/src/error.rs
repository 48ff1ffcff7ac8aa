use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic polynomial x^2 - {tr}x + {det} has complex roots")]
    ComplexEigenvalues { tr: BigInt, det: BigInt },

    #[error("ad - bcD = {det}, expected 1")]
    NotUnimodular { det: BigInt },

    #[error("z = {re} + {im}i is not in the upper half plane")]
    NotUpperHalfPlane { re: String, im: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("group action produced a non-integral entry: {0}")]
    InternalNonIntegral(String),

    #[error("squared matrix is not of the form [[a, b*sqrt(D)], [c*sqrt(D), d]]: {0}")]
    NotClosed(String),

    #[error("no theta-factorization exists: {0}")]
    NotFactorizable(String),

    #[error("slope map has a pole at x = {0}")]
    PoleHit(String),

    #[error("{0}")]
    NotApplicable(String),

    #[error("growth sequence vanishes at n = {n}")]
    DegenerateSequence { n: u64 },

    #[error("trace {trace} is outside the range tr < -2 where the formula holds")]
    OutOfScopeTrace { trace: BigInt },
}

impl Error {
    /// Stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ComplexEigenvalues { .. } => "ComplexEigenvalues",
            Error::NotUnimodular { .. } => "NotUnimodular",
            Error::NotUpperHalfPlane { .. } => "NotUpperHalfPlane",
            Error::InvalidInput(_) => "InvalidInput",
            Error::InternalNonIntegral(_) => "InternalNonIntegral",
            Error::NotClosed(_) => "NotClosed",
            Error::NotFactorizable(_) => "NotFactorizable",
            Error::PoleHit(_) => "PoleHit",
            Error::NotApplicable(_) => "NotApplicable",
            Error::DegenerateSequence { .. } => "DegenerateSequence",
            Error::OutOfScopeTrace { .. } => "OutOfScopeTrace",
        }
    }
}
