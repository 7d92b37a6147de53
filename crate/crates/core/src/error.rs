use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// One entry per failed clause, in a stable machine-readable form.
    #[error("precondition failed: {}", .0.join(", "))]
    Precondition(Vec<String>),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    /// An internal consistency check failed; the payload is a full dump.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
