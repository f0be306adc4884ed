//! File formats, reports and the command implementations behind the
//! `coarse-lip` binary.

pub mod commands;
pub mod error;
pub mod formats;
pub mod parallel;

pub use commands::{Output, RunConfig};
pub use error::CliError;
