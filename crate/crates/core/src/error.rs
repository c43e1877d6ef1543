use thiserror::Error;

/// Errors raised by the numerics, engine, potential and oracle layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("jet centers differ")]
    CenterMismatch,

    #[error("derivative information exhausted: jet degree {available} cannot supply {required} more derivative(s)")]
    DerivativeExhausted { required: usize, available: usize },

    #[error("division at a singular point: {0}")]
    Singularity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
