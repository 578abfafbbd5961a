//! Error type shared by every module of the library.

use thiserror::Error;

/// Failure modes of the numerical operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter violates the documented preconditions.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// The input is too large for an exact algorithm.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    /// A descriptor or literal could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// The solver did not reach a usable answer.
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// Reading a data file failed.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
