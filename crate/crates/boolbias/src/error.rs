use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input dimension outside the supported `1..=16` range.
    #[error("input dimension n = {n} outside supported range 1..={max}", max = crate::boolfn::MAX_N)]
    DimensionOutOfRange { n: usize },
    /// Two objects that must share an input dimension do not.
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// An input vector whose length is not the function's dimension.
    #[error("input vector has {got} components, expected {expected}")]
    InputLength { expected: usize, got: usize },
    /// Malformed textual representation (function string, hex, DNF syntax, ...).
    #[error("parse error: {0}")]
    Parse(String),
    /// A value violates an operation's domain (negative probability, t out of range, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The request exceeds a documented exact-computation budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// Filesystem failure while writing or reading artifacts.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
