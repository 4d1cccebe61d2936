use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("role error: {0}")]
    Role(String),
    #[error("endpoint error: {0}")]
    Endpoint(String),
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error("incompatible codes: {0}")]
    IncompatibleCodes(String),
    #[error("inconsistent syndrome data: {0}")]
    Inconsistent(String),
    #[error("value out of range: {0}")]
    Range(String),
    #[error("{0}")]
    TooLarge(String),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}
