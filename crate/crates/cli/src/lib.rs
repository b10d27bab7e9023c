//! The `bornbench` experiment harness: config files, run directories and
//! the subcommands behind the binary.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod runconfig;

pub use cli::{run, Cli};
pub use error::CliError;
pub use runconfig::RunConfig;
