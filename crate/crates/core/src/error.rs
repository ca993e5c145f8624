use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series too short: need at least {needed} values, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("non-positive value {value} at index {index} under log returns")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("degenerate series: {0}")]
    DegenerateSeries(&'static str),

    #[error("lag {tau_max} too large for {len} returns (need tau_max <= len - 2)")]
    LagTooLarge { tau_max: usize, len: usize },

    #[error("window {window} invalid for series of length {len} (must be odd and <= length)")]
    WindowTooLarge { window: usize, len: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("bad split: n_train = {n_train} for dataset of size {size}")]
    BadSplit { n_train: usize, size: usize },

    #[error("k = {k} too large for dataset of size {size}")]
    KTooLarge { k: usize, size: usize },

    #[error("normal equations are singular")]
    SingularSystem,

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("stylization failed at iteration {iteration}: {source}")]
    Stylization {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("sample {index} failed: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
