use thiserror::Error;

use crate::engine::RuleId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse index: bad token {token:?} ({reason})")]
    Parse { token: String, reason: String },

    /// Input outside the domain of an operation (e.g. a non-admissible index where one is required).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arrow {op} is not applicable to {index}")]
    InapplicableArrow { op: String, index: String },

    #[error("rule {rule} not applicable: {reason}")]
    RuleNotApplicable { rule: RuleId, reason: String },

    /// A derivation reached a state the transport algorithms never produce from a valid start.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("divergent evaluation: {0}")]
    Divergent(String),

    #[error("replay failed at step {step}: {reason}")]
    Replay { step: usize, reason: String },

    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}
