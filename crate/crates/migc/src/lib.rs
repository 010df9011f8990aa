//! File formats, parallel benchmark runners, the `migc` command line and
//! the HTTP session service, on top of [`migc_core`].

pub mod cli;
pub mod error;
pub mod formats;
pub mod runners;
pub mod service;
pub mod tables;

pub use error::{Error, Result};
