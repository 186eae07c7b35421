use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: u64, limit: u64 },

    #[error("graph of {vertices} vertices needs {bits} adjacency bits, above the cap of {cap}")]
    SizeCapExceeded { vertices: u64, bits: u128, cap: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parameter validation failed: {0}")]
    Validation(String),

    #[error("label/certificate mismatch: {0}")]
    LabelMismatch(String),

    #[error("inexact input: {0}")]
    Inexact(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
