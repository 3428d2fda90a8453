use thiserror::Error;

use crate::starter::VerificationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: element has {found} coordinates, group has {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("group order {order} exceeds the cap of {cap} for this operation")]
    CapExceeded { order: usize, cap: usize },

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("not a valid structure:\n{0}")]
    Invalid(VerificationReport),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
