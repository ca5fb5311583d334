//! `benford` command-line tool: digit-law conformity reports over count
//! datasets, trimming sweeps, synthetic samples and plot data.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;

pub use args::{run, Cli};
pub use error::CliError;
