//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by mask generation, acquisition, reconstruction, and
/// benchmarking.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter violates a documented precondition (odd block size,
    /// mismatched dimensions, out-of-range configuration, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input data violates an invariant (non-finite pixel, mask without the
    /// one-open-pixel-per-cell property, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Too few usable samples to set up the requested operation, e.g. fewer
    /// than three non-collinear open pixels for scattered interpolation.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A file did not parse as the expected format.
    #[error("format error: {0}")]
    Format(String),

    /// I/O failure, annotated with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// An I/O error annotated with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
