//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by any operation in this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The byte stream could not be decoded as a supported image.
    #[error("failed to decode image: {0}")]
    Decode(String),

    /// The stream decoded but uses a layout this crate does not handle
    /// (16-bit samples, alpha channels, exotic color types).
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),

    /// Two images that must agree in size do not.
    #[error("dimension mismatch: {expected_w}x{expected_h} vs {actual_w}x{actual_h}")]
    DimensionMismatch {
        expected_w: usize,
        expected_h: usize,
        actual_w: usize,
        actual_h: usize,
    },

    /// An image (or pyramid level) is too small for the requested operation.
    #[error("degenerate size {width}x{height} in {context}")]
    DegenerateSize {
        width: usize,
        height: usize,
        context: String,
    },

    /// Requested residual level does not exist for the given pyramid depth.
    #[error("level {level} out of range for a pyramid with {levels} residual levels")]
    LevelOutOfRange { level: usize, levels: usize },

    /// The residual plane at the requested level is smaller than the SSIM
    /// window. `max_level` is the deepest level this image admits.
    #[error("level {level} too deep: residual is {width}x{height}, below the {window}x{window} window (max admissible level is {max_level})")]
    LevelTooDeep {
        level: usize,
        width: usize,
        height: usize,
        window: usize,
        max_level: usize,
    },

    /// Image smaller than the filter/window that must run over it.
    #[error("image {width}x{height} is smaller than the {extent}x{extent} window")]
    WindowTooLarge {
        width: usize,
        height: usize,
        extent: usize,
    },

    /// A parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// An operation that needs at least one element received none.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// Two distributions with different binning cannot be compared.
    #[error("histogram binning mismatch: {0}")]
    BinningMismatch(String),

    /// Stored pyramid planes do not form a consistent size chain.
    #[error("corrupt pyramid: {0}")]
    CorruptPyramid(String),

    /// No file in a source directory could be ingested.
    #[error("no usable images in {dir}: {}", failures.join("; "))]
    Ingest { dir: PathBuf, failures: Vec<String> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
