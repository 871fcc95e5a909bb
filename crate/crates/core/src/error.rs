use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported k = {0}")]
    UnsupportedK(u32),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("window instability: {0}")]
    WindowInstability(String),
}

pub type Result<T> = std::result::Result<T, Error>;
