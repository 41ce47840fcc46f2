use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the cryptosystem and its analysis tools.
#[derive(Debug, Error)]
pub enum Error {
    /// A chaotic state or parameter left its valid interval.
    #[error("domain error: {what} = {value} is outside {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("key field {field} = {value} is outside {range}")]
    KeyRange {
        field: String,
        value: f64,
        range: &'static str,
    },

    #[error("key must be exactly {expected} bytes, got {actual}")]
    KeyLength { expected: usize, actual: usize },

    #[error("invalid key value `{0}`")]
    KeyText(String),

    #[error("expected {expected} key values, got {actual}")]
    KeyValueCount { expected: usize, actual: usize },

    #[error("symbol {symbol} is outside the alphabet of size {alphabet}")]
    Symbol { symbol: u16, alphabet: usize },

    #[error("alphabet size {0} is not a power of two in [2, 256]")]
    Alphabet(usize),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("invalid image dimensions {width}x{height} for {len} pixels")]
    InvalidImage {
        width: usize,
        height: usize,
        len: usize,
    },

    #[error("invalid detector parameters: {0}")]
    Detector(String),

    #[error("partition does not cover the image: {0}")]
    Coverage(String),

    #[error("the mask sub-key (sk3) is required to locate the contour and region subsets")]
    MissingMaskKey,

    #[error("zero variance in the {0} sample; correlation is undefined")]
    ZeroVariance(&'static str),

    #[error("image needs at least {needed} adjacent pairs, has {available}")]
    NotEnoughPairs { needed: usize, available: usize },

    #[error("bit flip at pixel {index}, bit {bit} is outside the image")]
    Flip { index: usize, bit: u8 },

    #[error("unsupported image format for {path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error(transparent)]
    Image(#[from] image::ImageError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Broad class used by front ends to pick an exit status.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain { .. }
            | Error::KeyRange { .. }
            | Error::Symbol { .. }
            | Error::Alphabet(_)
            | Error::MissingMaskKey => ErrorKind::Crypto,
            _ => ErrorKind::Data,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input data, file or format.
    Data,
    /// Key, parameter or symbol outside its cryptographic domain.
    Crypto,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
