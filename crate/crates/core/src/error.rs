use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series is not invertible: constant term is zero")]
    NotInvertible,

    /// A q-series identity that must hold for a consistent configuration did not.
    #[error("identity violation: {0}")]
    IdentityViolation(String),

    #[error("precision unreachable: certified {achieved} of {requested} digits")]
    PrecisionUnreachable { requested: i64, achieved: i64 },

    /// Two computations of the same p-adic quantity disagree.
    #[error("inconsistent values: {0}")]
    Inconsistent(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("integrality violation: {0}")]
    Integrality(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
