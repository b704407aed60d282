use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] supercong_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed CSV report: {0}")]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl CliError {
    /// Process exit code for an error that stopped the run.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub type CliResult<T> = Result<T, CliError>;
