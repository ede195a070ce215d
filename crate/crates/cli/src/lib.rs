//! Library side of the `rbfnet` command-line harness: experiment pipelines,
//! canned demos, configuration loading, and report/CSV emission. The binary
//! in `main.rs` is a thin clap wrapper over these.

pub mod commands;
pub mod config;
pub mod demos;
pub mod error;
pub mod report;

pub use error::CliError;
pub use report::ExperimentReport;
