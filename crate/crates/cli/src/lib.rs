//! Command-line front end and report formats for `covdepth-core`.

pub mod args;
pub mod commands;
pub mod error;
pub mod experiment;
pub mod report;
pub mod tables;

use args::{Cli, Command};
use error::CliResult;

/// Runs a parsed command line and returns what goes to stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Expect(a) => commands::cmd_expect(a, cli.budget),
        Command::Simulate(a) => commands::cmd_simulate(a),
        Command::Bounds(a) => commands::cmd_bounds(a, cli.budget),
        Command::Exact(a) => commands::cmd_exact(a, cli.budget),
        Command::ReproduceTables(a) => tables::cmd_reproduce_tables(a, cli.budget),
    }
}
