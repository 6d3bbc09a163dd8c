use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration; the message names the offending field.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] heinz_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
