use std::io;

/// Crate-wide error type. The CLI maps each variant to a distinct exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid argument, configuration field, or precondition violation.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    /// Numerical failure, e.g. an unattainable calibration target.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for this error: 2 validation, 3 i/o, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) => 2,
            Error::Io(_) => 3,
            Error::Numerical(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
