use thiserror::Error;

use crate::product::ProductEvaluation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The argument lies outside the region where the requested formula converges
    /// or is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested accuracy cannot be certified. When the failure comes from a
    /// product evaluation the uncertified result is attached so callers can still
    /// report it.
    #[error("precision error: {message}")]
    Precision {
        message: String,
        evaluation: Option<Box<ProductEvaluation>>,
    },

    #[error("resource limit: requested {requested}, limit is {limit}")]
    ResourceLimit { requested: u64, limit: u64 },

    #[error("invalid input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision {
            message: msg.into(),
            evaluation: None,
        }
    }
}
