//! Command-line and HTTP front end for the variant literature index.

pub mod commands;
pub mod config;
pub mod server;

pub use commands::{cmd_ingest, cmd_query, render_hits, render_report, CliError, OutputFormat};
pub use config::Config;
pub use server::{router, AppState, ParseResponse};
