use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of a computation on valid inputs (as opposed to
    /// rejected inputs).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
