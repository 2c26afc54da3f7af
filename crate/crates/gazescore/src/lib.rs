//! Files, reports and the command line around `gazescore-core`.

pub mod cli;
pub mod config;
pub mod csvio;
pub mod error;
pub mod plot;
pub mod report;

pub use error::{Error, Result};
