use std::io;

use qpuf_core::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Dimension(String),
    #[error("{0}")]
    Assertion(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

impl CliError {
    /// 0 success, 1 i/o, 2 usage, 3 parse/format, 4 dimension/guard,
    /// 5 failed assertion.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Dimension(_) => 4,
            CliError::Assertion(_) => 5,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_) | CoreError::UnsupportedOrder(_) | CoreError::EmptyEnsemble => 2,
                CoreError::Malformed(_)
                | CoreError::UnknownVersion(_)
                | CoreError::InvalidState(_)
                | CoreError::NonFinite => 3,
                CoreError::DimensionMismatch { .. } | CoreError::GuardExceeded { .. } => 4,
                CoreError::NotUnitary { .. } | CoreError::EigenFailure => 5,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn required<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("missing required parameter --{flag}")))
}
