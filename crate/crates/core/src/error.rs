//! Error type shared across the toolkit.
//!
//! Variants map onto the CLI exit-code contract: configuration problems,
//! data/format problems, and numeric failures are kept distinct so callers
//! can translate them without string matching.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shape rejection from a tensor/network operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// Invalid configuration (bad key, bad value, inconsistent options).
    #[error("config error: {0}")]
    Config(String),

    /// Missing or malformed input data (files, masks, manifests).
    #[error("data error: {0}")]
    Data(String),

    /// Malformed container/file format (bad magic, version, truncation).
    #[error("format error: {0}")]
    Format(String),

    /// Numeric failure (divergence, non-finite values).
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
