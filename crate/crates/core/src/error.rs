use thiserror::Error;

/// Failures raised by the laboratory's constructors and operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),
    #[error("wavelet table: {0}")]
    Table(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
