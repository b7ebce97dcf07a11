//! Error type shared by every module of the crate.
//!
//! The variants map onto the three failure classes the command-line front end
//! distinguishes: bad parameters or malformed input (usage), instances beyond
//! the documented desk-scale caps, and internal contract violations.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Input text (graph6, edge list, config file) could not be parsed.
    #[error("format error: {0}")]
    Format(String),

    /// The instance exceeds a documented desk-scale cap or exhausted the
    /// enumeration work budget.
    #[error("instance too large: {0}")]
    TooLarge(String),

    /// An internal invariant that callers cannot violate through arguments
    /// failed to hold; always a bug.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The operation is undefined for this pattern graph (e.g. bipartite or
    /// not edge-critical where the defining limit needs both).
    #[error("unsupported pattern: {0}")]
    UnsupportedPattern(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub(crate) fn too_large(msg: impl Into<String>) -> Self {
        Error::TooLarge(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn unsupported_pattern(msg: impl Into<String>) -> Self {
        Error::UnsupportedPattern(msg.into())
    }
}
