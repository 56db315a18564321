//! Command-line front end: argument parsing, command execution and the
//! on-disk document formats.

pub mod commands;
pub mod document;

pub use commands::{execute, Cli, CliError, Command, EXIT_INPUT, EXIT_VERIFY};
