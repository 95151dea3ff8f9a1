use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line count mismatch: source has {0} lines, target has {1}")]
    LineCountMismatch(usize, usize),

    #[error("{path}: invalid UTF-8 on line {line}")]
    InvalidEncoding { path: PathBuf, line: usize },

    #[error("score out of range at row {row}, column {col}: {value} (expected 0..=4)")]
    OutOfRangeScore { row: usize, col: usize, value: i64 },

    #[error("malformed row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("n-gram order {0} outside 1..=5")]
    InvalidOrder(usize),

    #[error("lexicon threshold {0} outside the open interval (0, 1)")]
    InvalidThreshold(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("labeled and unlabeled rows mixed in one feature file")]
    MixedLabeling,

    #[error("unsupported format version {found:?} (expected {expected:?})")]
    VersionMismatch { expected: String, found: String },

    #[error("corrupt model file: {0}")]
    CorruptModel(String),

    #[error("unknown grade {0:?}")]
    UnknownGrade(String),

    #[error("quality score {0} outside [0, 1]")]
    InvalidScore(f64),

    #[error("sentence id {0} has no matching record")]
    MissingId(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(row: usize, reason: impl Into<String>) -> Self {
        Error::MalformedRow {
            row,
            reason: reason.into(),
        }
    }

    /// Process exit code for the CLI: 2 for bad input or a broken contract,
    /// 1 for failures that are not the caller's fault.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { source, .. } => match source.kind() {
                io::ErrorKind::NotFound
                | io::ErrorKind::PermissionDenied
                | io::ErrorKind::InvalidInput
                | io::ErrorKind::InvalidData => 2,
                _ => 1,
            },
            _ => 2,
        }
    }
}
