use std::io;

use thiserror::Error;

/// Errors produced anywhere in the learning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Non-binary or malformed token. `row` and `col` are 1-based text positions.
    #[error("invalid token {token:?} at row {row}, column {col}")]
    Parse { row: usize, col: usize, token: String },

    #[error("malformed {what} at line {line}: {msg}")]
    Format { what: &'static str, line: usize, msg: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty input")]
    EmptyInput,

    #[error("invalid blanket for target {target}: {msg}")]
    InvalidBlanket { target: usize, msg: String },

    #[error("blanket of size {size} exceeds the cap of {cap}")]
    BlanketTooLarge { size: usize, cap: usize },

    #[error("index {index} out of range for {len} vertices")]
    Index { index: usize, len: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("model with {0} variables is too large for exact enumeration")]
    TooLarge(usize),

    #[error("true graph has no edges; standardized Hamming distance is undefined")]
    DegenerateTruth,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("move budget of {budget} exhausted during {phase}")]
    BudgetExceeded { phase: &'static str, budget: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used in `ERROR <kind>:` lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Format { .. } => "format",
            Error::Shape(_) => "shape",
            Error::EmptyInput => "empty-input",
            Error::InvalidBlanket { .. } => "invalid-blanket",
            Error::BlanketTooLarge { .. } => "blanket-too-large",
            Error::Index { .. } => "index",
            Error::InvalidDimension(_) => "invalid-dimension",
            Error::InvalidSize(_) => "invalid-size",
            Error::TooLarge(_) => "too-large",
            Error::DegenerateTruth => "degenerate-truth",
            Error::InvalidConfig(_) => "invalid-config",
            Error::BudgetExceeded { .. } => "budget-exceeded",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
