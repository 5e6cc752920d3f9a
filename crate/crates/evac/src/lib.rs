//! File formats, reports and the `evac` command line on top of [`evac_core`].
//!
//! Exit statuses: 0 success, 1 verification failure, 2 infeasible or invalid
//! input, 3 I/O, parse or usage error.

pub mod cli;
pub mod config;
pub mod error;
pub mod numfmt;
pub mod report;
pub mod sampling;
pub mod strategy_file;
pub mod sweep;
pub mod verify;

pub use error::{CliError, Result};
