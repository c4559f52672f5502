use thiserror::Error;

/// Failure modes shared by every exact computation in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("value is not divisible by {p}^{exponent}")]
    NotDivisible { p: u64, exponent: u32 },
    #[error("insufficient precision: need {required}, have {available}")]
    Precision { required: usize, available: usize },
    #[error("unsupported coefficient ring: {0}")]
    UnsupportedRing(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("evaluation error: factor `{0}` vanishes at working precision")]
    VanishingFactor(String),
}

pub type Result<T> = std::result::Result<T, Error>;
