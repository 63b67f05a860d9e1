//! File formats, command-line front end and benchmark harness around
//! `mpsqaoa-core`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod formats;

pub use cli::run;
pub use error::CliError;
