pub mod bench;
pub mod cli;
pub mod config;
pub mod crlb;
pub mod error;
pub mod fit;
pub mod io;
pub mod mer;
pub mod noise;
pub mod spectrum;
pub mod wavelet;

pub use error::{Error, Result};
