//! Command-line front end for `khsheet-core`: configuration, subcommands and
//! CSV/JSON output.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use cli::main_with;
pub use config::RunConfig;
pub use error::{CliError, CliResult};
