use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual or JSON input; `token` names the offending piece.
    #[error("cannot parse `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    /// A configured resource bound would be exceeded. This is never a
    /// statement about the answer.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
}

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse { token: token.into(), reason: reason.into() }
    }

    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}
