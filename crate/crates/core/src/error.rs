use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands or inputs do not fit together (mismatched rings, lengths, shapes).
    #[error("structural error: {0}")]
    Structural(String),
    /// An operation needs more significant digits than are available.
    #[error("precision loss: {what} needs absolute precision {required}, have {available}")]
    PrecisionLoss {
        what: String,
        required: i64,
        available: i64,
    },
    /// The input lies outside the supported class of objects.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// A Galois check failed; lists the conjugates that are missing.
    #[error("extension is not Galois: {0}")]
    NotGalois(String),
    /// A truncation or enlargement heuristic ran out of budget.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
