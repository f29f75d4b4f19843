use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{value} is out of range (limit {limit})")]
    OutOfRange { value: u64, limit: u64 },

    #[error("corrupt sieve cache: {0}")]
    CorruptCache(String),

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("too large: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
