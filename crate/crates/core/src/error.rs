use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text. `row` is 1-based over data rows (the header is row 0).
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    /// A cell that parsed but violates a domain invariant (non-positive, non-finite).
    #[error("invalid value at row {row}, column {column}: {message}")]
    Validation { row: usize, column: usize, message: String },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("insufficient history: day {day} needs at least {needed} days")]
    InsufficientHistory { day: usize, needed: usize },

    #[error("optimizer did not converge after {iterations} iterations (gap bound {gap:.3e})")]
    NonConvergence {
        iterations: usize,
        gap: f64,
        best: Vec<f64>,
    },

    #[error("unknown format: {0}")]
    UnknownFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
