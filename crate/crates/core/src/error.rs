use thiserror::Error;

/// Errors raised by the library. Every variant carries a human-readable
/// explanation; the CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// The operation is the wrong one for this input; another entry point handles it.
    #[error("dispatch error: {0}")]
    Dispatch(String),
    /// Two independent computations of the same quantity disagreed.
    #[error("consistency error: {0}")]
    Consistency(String),
    /// A bounded search ran out of budget before reaching a conclusion.
    #[error("search budget exhausted: {0}")]
    Budget(String),
    /// The polynomial is not squarefree modulo the given prime.
    #[error("polynomial is not squarefree modulo {0} (ramified pattern)")]
    RamifiedPattern(String),
    /// Numerical evaluation failed to converge.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// True for errors caused by the caller's input rather than by the library.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Dispatch(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
