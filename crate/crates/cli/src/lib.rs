//! Command-line front end for `qgame-core`: game catalogue, run
//! configuration, CSV/JSON records and SVG plots.

pub mod angle;
pub mod args;
pub mod catalogue;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::io::Write;

pub use args::{Cli, Command, Flags, Format};
pub use catalogue::{load_catalogue, CatalogueError, GameCatalogue};
pub use config::RunConfig;
pub use error::CliError;

/// Resolves the configuration and runs one subcommand.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    commands::execute(cli.command, &cfg, stdout)
}
