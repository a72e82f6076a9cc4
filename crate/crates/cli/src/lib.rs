//! Expression parsing, configuration, suite dispatch and reports for the `kappa` command.

pub mod config;
pub mod parse;
pub mod report;
pub mod suites;
