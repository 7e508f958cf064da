use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("eigensolver did not converge")]
    EigenFailure,

    #[error("dimension guard exceeded: {what} = {value} (limit {limit})")]
    GuardExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("unknown descriptor version {0}")]
    UnknownVersion(u64),

    #[error("exact Haar moment operator is only available for t in {{1, 2}}, got t = {0}")]
    UnsupportedOrder(usize),

    #[error("ensemble is empty")]
    EmptyEnsemble,
}

pub type Result<T> = std::result::Result<T, Error>;
