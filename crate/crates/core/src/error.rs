use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at coordinate {index}")]
    NonFiniteEntry { index: usize },

    #[error("empty vector: dimension must be at least 1")]
    EmptyVector,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length cap exceeded: requested {requested}, cap {cap}")]
    LengthCap { requested: usize, cap: usize },

    #[error("non-finite iterate at step {step}")]
    NonFinite { step: usize },

    #[error("parameter {value} outside the validity range {range} of this bound")]
    OutOfValidity { value: f64, range: &'static str },

    #[error("measure {measure} is not supported for schedule kind {kind}")]
    UnsupportedMeasure { kind: String, measure: String },

    #[error("iterate left the linear branch of the Huber function at step {step}")]
    LeftLinearBranch { step: usize },

    #[error("x_star is not a minimizer of the instance: {0}")]
    NotAMinimizer(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
