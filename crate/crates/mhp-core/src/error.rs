//! Error type shared across the toolkit.

use std::path::PathBuf;

use thiserror::Error;

use crate::scene::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Semantically invalid input (bad argument, out-of-range value,
    /// malformed dataset structure). Maps to exit code 1 in the CLI.
    #[error("{0}")]
    Domain(String),

    /// A scene failed invariant validation.
    #[error("invalid scene `{image_id}`: {}", format_violations(.violations))]
    InvalidScene {
        image_id: String,
        violations: Vec<Violation>,
    },

    /// Ground truth and prediction datasets do not cover the same images.
    #[error("dataset misalignment: {0}")]
    Misalignment(String),

    /// Filesystem failure. Maps to exit code 2 in the CLI.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A file exists but its bytes cannot be decoded (bad PNG, truncated
    /// location map, unparseable manifest). Maps to exit code 2.
    #[error("{path}: {message}")]
    Codec { path: PathBuf, message: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn codec(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Codec {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True when the failure is at the byte/filesystem level rather than a
    /// semantic problem with otherwise readable data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. } | Error::Codec { .. })
    }
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
