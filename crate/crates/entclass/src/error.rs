//! Error types shared across the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown SLOCC family: {0}")]
    UnknownFamily(String),

    #[error("unknown measurement scheme: {0}")]
    UnknownScheme(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported format version {found} (supported: {supported})")]
    VersionMismatch { found: u16, supported: u16 },

    #[error("truncated file: {0}")]
    Truncated(String),

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("numeric divergence: {0}")]
    NumericDivergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
