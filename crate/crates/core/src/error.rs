use std::time::Duration;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("degenerate labels: {0}")]
    DegenerateLabels(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("fit failed at stage {stage}: {msg}")]
    Fit { stage: usize, msg: String },

    #[error("solver timed out after {elapsed:?}; best clique size found so far is {lower_bound}")]
    Timeout { lower_bound: usize, elapsed: Duration },

    #[error("unsupported model format version {0}")]
    Version(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
