use thiserror::Error;

/// Errors raised by the laboratory.
///
/// The split between validation failures and numeric guards mirrors the CLI
/// exit codes: the former are caller mistakes, the latter mean a computation
/// was attempted but its result cannot be trusted.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("no crossing: {0}")]
    NoCrossing(String),

    /// Underflow, aliasing, degenerate data and similar.
    #[error("numeric guard: {0}")]
    NumericGuard(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn guard(msg: impl Into<String>) -> Self {
        Error::NumericGuard(msg.into())
    }

    /// True for failures of the numeric-guard class.
    pub fn is_numeric_guard(&self) -> bool {
        matches!(self, Error::NumericGuard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
