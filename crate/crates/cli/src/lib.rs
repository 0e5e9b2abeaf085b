//! Command-line front end for gram-core: CSV ingestion, the `dist`,
//! `gram-check`, `regress` and `verify` subcommands, and their text/JSON
//! reports.

pub mod commands;
pub mod csv_input;
pub mod output;

pub use commands::{run, Cli};
pub use output::{ExitStatus, Format, Report};
