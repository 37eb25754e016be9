use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ArityMismatch at {position}: {detail}")]
    ArityMismatch { position: String, detail: String },
    #[error("SyntaxError at line {line}: {reason}")]
    SyntaxError { line: usize, reason: String },
    #[error("UnboundVariable: {0}")]
    UnboundVariable(String),
    #[error("TooLarge: {0}")]
    TooLarge(String),
    #[error("WrongArity: {0}")]
    WrongArity(String),
    #[error("NotLinear: {0}")]
    NotLinear(String),
    #[error("InvalidArity: {0}")]
    InvalidArity(String),
}

impl Error {
    /// The bare variant name, as reported by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::UnboundVariable(_) => "UnboundVariable",
            Error::TooLarge(_) => "TooLarge",
            Error::WrongArity(_) => "WrongArity",
            Error::NotLinear(_) => "NotLinear",
            Error::InvalidArity(_) => "InvalidArity",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
