use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the processing chain.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("peak centre {center_hz} Hz lies outside the frequency axis [{lo_hz}, {hi_hz}] Hz")]
    PeakOutsideAxis { center_hz: f64, lo_hz: f64, hi_hz: f64 },

    #[error("signal of length {len} is shorter than the filter support {support}")]
    SignalTooShort { len: usize, support: usize },

    #[error("all pixels are masked")]
    AllMasked,

    #[error("fit region has {pixels} pixels but {params} free parameters need at least {needed}")]
    DegenerateRegion { pixels: usize, params: usize, needed: usize },

    #[error("found {found} peak(s), {wanted} requested")]
    NotEnoughPeaks { found: usize, wanted: usize },

    #[error("zero relative intensity: the variance bound diverges")]
    DivergentBound,

    #[error("zero Brillouin amplitude: SNR is undefined")]
    UndefinedSnr,

    #[error("SNR {0} not present in report")]
    MissingSnr(f64),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
