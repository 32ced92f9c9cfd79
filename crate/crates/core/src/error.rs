use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing header key `{0}`")]
    MissingKey(String),
    #[error("malformed header line `{0}`")]
    MalformedValue(String),
    #[error("invalid dataset header: {0}")]
    InvalidHeader(String),
    #[error("line {0}: wrong number of columns")]
    RowArity(usize),
    #[error("expected {expected} data rows, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("line {0}: non-finite or unparsable value")]
    NonFinite(usize),
    #[error("line {0}: target values must be exactly 0 or 1")]
    InvalidTarget(usize),
    #[error("normalization statistics need at least one training row")]
    EmptyTraining,
    #[error("initial weight range must be positive, got {0}")]
    InvalidRange(f64),
    #[error("arity mismatch: expected {expected} values, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("example set is empty")]
    EmptySet,
    #[error("pattern order is not a permutation of 0..{0}")]
    InvalidOrder(usize),
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error("malformed network text: {0}")]
    MalformedNetwork(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("raw csv: {0}")]
    Csv(#[from] csv::Error),
}
