//! File formats, configuration, reports and multi-threaded execution for
//! [`fuzzrank_core`], plus the `fuzzrank` command line tool.

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod io;
pub mod parallel;
pub mod report;

pub use error::{Error, Result};
pub use fuzzrank_core as core;
