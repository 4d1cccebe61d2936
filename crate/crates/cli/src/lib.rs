//! Command-line front end and HTTP/JSON service for designing parity-check
//! quantum codes. The binary is `cpc`; see [`commands::Command`] for the
//! subcommands and [`service`] for the API.

pub mod bundle;
pub mod commands;
pub mod diagnostics;
pub mod error;
pub mod input;
pub mod service;

pub use bundle::CodeBundle;
pub use commands::run;
pub use error::{CliError, CliResult};
