use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid value at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("trace output failed: {0}")]
    Trace(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] drsplit_core::Error),
}

impl CliError {
    pub(crate) fn validation(path: impl Into<String>, message: impl ToString) -> Self {
        Self::Validation {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
