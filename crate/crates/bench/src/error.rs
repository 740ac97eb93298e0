use qap_core::QapError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid plan: {0}")]
    Plan(String),

    #[error(transparent)]
    Qap(#[from] QapError),

    #[error("unknown report format '{0}' (expected csv, json or markdown)")]
    UnknownFormat(String),

    #[error("unknown chart metric '{0}' (expected diff or time)")]
    UnknownMetric(String),

    #[error("nothing to report")]
    EmptyReport,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, BenchError>;
