//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol {symbol} is not in the {alphabet}-ary alphabet")]
    InvalidSymbol { symbol: i32, alphabet: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("all-zero window, no spectral peak to estimate from")]
    DegenerateSpectrum,

    #[error("unique word not found (peak-to-next ratio {ratio:.2})")]
    UniqueWordNotFound { ratio: f64 },

    #[error("statistically unreliable request: {0}")]
    Unreliable(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
