use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request is well-formed but exceeds an enumeration or memory guard.
    #[error("capacity exceeded: {what} requires {required}, limit is {limit}")]
    Capacity {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    #[error("invalid probability mass function: {0}")]
    InvalidPmf(String),

    #[error("distance curve does not cross {epsilon} on [0, {horizon}]")]
    NoCrossing { epsilon: f64, horizon: f64 },

    /// Declared limits violate one of the implications between regimes.
    #[error("inconsistent declared limits: {0}")]
    Contradiction(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
