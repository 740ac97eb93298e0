use thiserror::Error;

/// Errors raised by the model, the QAPLIB readers and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QapError {
    #[error("instance size must be at least 1")]
    EmptyInstance,

    #[error("{matrix} matrix has {found} entries, expected {expected} for n={n}")]
    MatrixShape {
        matrix: &'static str,
        n: usize,
        expected: usize,
        found: usize,
    },

    #[error("{matrix}[{row}][{col}] = {value} is not a valid weight (must be finite and >= 0)")]
    InvalidEntry {
        matrix: &'static str,
        row: usize,
        col: usize,
        value: String,
    },

    #[error("worst-case objective for this instance does not fit the weight type")]
    Overflow,

    #[error("dimension mismatch: assignment has length {assignment}, instance has n={instance}")]
    DimensionMismatch { assignment: usize, instance: usize },

    #[error("index {index} out of range for size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("parse error at token {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("truncated input: expected {expected} integers, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("unknown instance '{name}'; known instances: {}", known.join(", "))]
    UnknownInstance { name: String, known: Vec<String> },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, QapError>;
