//! Batch driver for the `supercong-core` checks: subcommands per family,
//! parallel scans and JSON/CSV/text reports.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Command, Format, LambdaPolicy, RunConfig};
pub use error::{CliError, CliResult};
pub use output::{emit, Row, RunReport, Summary};
pub use run::run;
