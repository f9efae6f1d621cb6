//! Command-line front end for `charvar`: JSON run configs, the `solve`, `certify`,
//! `volume` and `seifert-scan` commands, and their artifacts.
//!
//! Exit codes: 0 success, 1 configuration or i/o error, 2 numerical failure,
//! 3 certification failure.

pub mod certify;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use certify::{Bound, Check, CertifyReport};
pub use config::RunConfig;
pub use error::{CliError, ErrorKind};

/// JSON schema of the `certify` report.
pub const CERTIFY_REPORT_SCHEMA: &str = include_str!("../schema/certify_report.schema.json");
