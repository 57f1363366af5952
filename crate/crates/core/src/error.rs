//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("bad file format: {0}")]
    Format(String),

    #[error("index out of grid: ({row}, {col}) for {rows}x{cols}")]
    IndexOutOfGrid {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("undefined signal power: input is all zero")]
    ZeroSignal,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
