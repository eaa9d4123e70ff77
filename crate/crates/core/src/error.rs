use thiserror::Error;

/// Errors raised by the computations in this crate.
///
/// Variants split into caller mistakes (`DegreeMismatch`, `OutOfRange`,
/// `InvalidInput`, ...) and `Internal`, which signals a violated invariant
/// of one of the engines and should never be observed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: expected total degree {expected}, got {found}")]
    DegreeMismatch { expected: u64, found: u64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(i64),

    #[error("polynomiality check failed: {0}")]
    PolynomialityCheckFailed(String),

    #[error("outside theorem hypotheses: {0}")]
    OutsideHypotheses(String),

    #[error("\u{3c7}_M(1) \u{2260} 0: {0}")]
    NonZeroAtOne(String),

    #[error("fan not smooth: {0}")]
    FanNotSmooth(String),

    #[error("fan not complete: {0}")]
    FanNotComplete(String),

    #[error("companion matrix construction only specified for n=3 (got n={0})")]
    CompanionMatrixUnavailable(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
