use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside 1..={limit}")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("numerical consistency: {0}")]
    NumericalConsistency(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("evaluating {label} at {arg} failed: {message}")]
    Evaluation {
        label: String,
        arg: u64,
        message: String,
    },

    #[error("verification failed at {at}: {message}")]
    Verification { at: u64, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
