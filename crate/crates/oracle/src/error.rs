use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid lattice or parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("ill-conditioned evaluation: {0}")]
    Conditioning(String),
    #[error(transparent)]
    Exact(#[from] bhlab_core::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;
