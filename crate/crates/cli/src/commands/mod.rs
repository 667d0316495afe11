//! Subcommand implementations.

mod datagen;
mod report;
mod run;

use crate::args::{Cli, Command};
use crate::error::CliError;

pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Datagen(args) => datagen::execute(args),
        Command::Run(args) => run::execute(args),
        Command::Report(args) => report::execute(args),
    }
}
