use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qci_tate::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed spec document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for a broken invariant, 2 for bad input, 3 for an exhausted budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qci_tate::Error::Resource { .. }) => 3,
            CliError::Core(qci_tate::Error::Consistency(_)) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
