//! Command-line front end for `gibbsfield`: configuration, reproducible
//! output framing and the experiment subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod identities;
pub mod output;

pub use error::CliError;
