use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("damping exponent sigma = {0} is outside [0, 2]")]
    SigmaOutOfRange(f64),

    #[error("space dimension must be at least 1")]
    ZeroDimension,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the zero frequency cannot be inverted: {0}")]
    ZeroFrequency(&'static str),

    #[error("degenerate eigen-structure: {0}")]
    Degenerate(String),

    #[error("case not covered: {0}")]
    Unsupported(String),

    #[error("non-positive value {value} at index {index}")]
    NonPositive { index: usize, value: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("profile theorem requires |P_U0| != 0 (got {0:e})")]
    VanishingMoment(f64),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
