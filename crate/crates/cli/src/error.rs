use std::io;
use std::path::PathBuf;

use pedlab_core::dissection::DissectionError;
use pedlab_core::partitions::PartitionError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("claim file line {line}: {msg}")]
    ClaimParse { line: usize, msg: String },
    #[error("claim file contains no claims")]
    EmptyClaimFile,
    #[error("unknown claim set `{0}` (expected ahs, theorem1, conjecture192 or all)")]
    UnknownSet(String),
    #[error(
        "claims need ped(n) up to n = {needed}, above the ceiling {ceiling} (raise --max-index)"
    )]
    TableTooLarge { needed: u64, ceiling: u64 },
    #[error("claim `{label}`: {source}")]
    Claim {
        label: String,
        #[source]
        source: PartitionError,
    },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Dissection(#[from] DissectionError),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
