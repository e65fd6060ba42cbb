use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Input data violates a precondition (bad ratio, unknown user, empty set, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("model error ({kind}): {message}")]
    Model { kind: String, message: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn model(kind: impl std::fmt::Display, msg: impl Into<String>) -> Self {
        Error::Model {
            kind: kind.to_string(),
            message: msg.into(),
        }
    }

    /// Whether this error stems from bad input data rather than a runtime failure.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Invalid(_) | Error::Json(_) | Error::Csv(_)
        ) || matches!(self, Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound)
    }
}
