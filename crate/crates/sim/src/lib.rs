//! Scenario files, CSV export bundles and command implementations for the
//! `stmr` command-line tool.

pub mod commands;
pub mod export;
pub mod scenario;

pub use commands::CliError;
pub use scenario::{load_scenario, parse_scenario, ScenarioError};
