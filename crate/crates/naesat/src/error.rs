//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by library operations.
///
/// `Domain` covers violated mathematical preconditions (assignments that are
/// not solutions, parameters outside a function's domain, budget overruns);
/// `Parse` and `Io` cover the text formula format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
