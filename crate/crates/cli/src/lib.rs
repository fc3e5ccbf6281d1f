//! Command-line front end: configuration files, curve cache and table output.

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run, Cli, CliError};
