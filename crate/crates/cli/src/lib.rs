//! Front end for `pedlab`: claim files, verification reports and the
//! `verify`, `prove` and `table` commands.

pub mod claims;
pub mod commands;
pub mod error;
pub mod report;

pub use commands::{
    cmd_prove, cmd_table, cmd_verify, ClaimSource, ProveOptions, TableFormat, VerifyOptions,
};
pub use error::CliError;
pub use report::{RunKind, RunStatus, VerificationReport};
