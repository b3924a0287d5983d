//! Command-line front end for `tpe-core`: run configuration, JSON and
//! table reports, and multi-threaded simulation.
//!
//! Exit codes: 0 on success, 1 when `check` finds the profile is not an
//! equilibrium, 2 on a configuration error.

pub mod cli;
pub mod config;
pub mod error;
pub mod json;
pub mod run;
pub mod table;

pub use config::{Format, RunConfig};
pub use error::{Error, Result};
pub use run::{execute, simulate_parallel, Command, Outcome};

/// Output text and exit code for a parsed command line.
pub fn run_cli(cli: &cli::Cli) -> Result<(String, u8)> {
    let (command, flags) = cli.flags();
    let cfg = match &cli.global.config {
        Some(path) => RunConfig::load(path)?.overlay(flags),
        None => flags,
    };
    let outcome = execute(command, &cfg)?;
    let json = outcome.report.to_json()?;
    if let Some(path) = &cli.global.out {
        std::fs::write(path, format!("{json}\n")).map_err(|source| Error::Write {
            path: path.clone(),
            source,
        })?;
    }
    let text = match cfg.format() {
        Format::Json => json,
        Format::Table => table::render(&outcome.report).trim_end().to_string(),
    };
    Ok((text, outcome.code))
}
