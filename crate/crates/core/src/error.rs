use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ternary letter {0:?} (expected 0, 1 or 2)")]
    InvalidLetter(char),

    #[error("pattern must be nonempty")]
    EmptyPattern,

    #[error("morphism image for letter {0} is empty")]
    EmptyImage(u8),

    #[error("morphism is not uniform (image lengths {0:?})")]
    NonUniform([usize; 3]),

    #[error("alpha index {0} out of range (expected 1..=4)")]
    InvalidAlphaIndex(usize),

    #[error("{0}")]
    Precondition(String),

    #[error(
        "no {n}-uniform square-free cyclic shift morphism exists (n in {{14, 15, 16, 20, 21, 22}})"
    )]
    Nonexistent { n: usize },

    #[error("n = {n} is not handled by this route: {reason}")]
    Unsupported { n: usize, reason: String },

    #[error("construction for n = {n} failed certification after {attempts} attempts (last x_length {x_length})")]
    ConstructionFailed {
        n: usize,
        attempts: usize,
        x_length: usize,
    },

    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("square created at output position {position} (window {window})")]
    StreamRejected { position: usize, window: String },

    #[error("{path}:{line}: {message}")]
    Fixture {
        path: String,
        line: usize,
        message: String,
    },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("malformed record: {0}")]
    Record(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
