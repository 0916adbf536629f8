//! Command line driver for `cube-constants-core`: family files and
//! shorthands, JSON and CSV output, and thread-pool drivers whose results
//! do not depend on the number of threads.

pub mod cli;
pub mod error;
pub mod family;
pub mod output;
pub mod parallel;
pub mod suites;

pub use error::CliError;
