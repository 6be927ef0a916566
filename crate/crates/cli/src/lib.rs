//! Library surface of the `aidsim` command line tool: configuration
//! loading and the subcommand implementations, exposed so integration
//! tests can drive them directly.

pub mod commands;
pub mod config;
