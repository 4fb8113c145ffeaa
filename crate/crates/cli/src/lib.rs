//! Batch experiment runner: parses `key = value` configuration files, runs
//! the requested experiment and writes one CSV file per invocation.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{run_command, CommandError, Subcommand};
pub use config::{parse_config, ConfigError, ExperimentConfig};
