//! The `qkit` command-line front end as a library: strict configs in,
//! deterministic reports out.
//!
//! Exit codes: `0` success, `1` numerical failure, `2` input error.

pub mod config;
pub mod error;
pub mod format;
pub mod run;

pub use config::{parse_config, Command, Config};
pub use error::CliError;
pub use run::{execute, Execution, Invocation};
