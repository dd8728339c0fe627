use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: y = {y} lies outside the grid window [{lo}, {hi}]")]
    Domain { y: f64, lo: f64, hi: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("not certifiable: {0}")]
    NotCertifiable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
