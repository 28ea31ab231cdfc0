use std::path::PathBuf;

use thiserror::Error;

use crate::invariants::Context;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty domain: no partitions of {g} into {l} parts (need 1 <= l <= g)")]
    EmptyDomain { g: u32, l: u32 },

    #[error("invalid context N={n}, k={k}: {reason}")]
    InvalidContext { n: u32, k: u32, reason: String },

    #[error("context mismatch: expected {expected}, found {found}")]
    ContextMismatch { expected: Context, found: Context },

    #[error("table kind mismatch: expected {expected} table, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("invalid key {key}: {reason}")]
    InvalidKey { key: String, reason: String },

    #[error("missing table entry for {key}")]
    MissingEntry { key: String },

    #[error("{term}, factor {factor}: {source}")]
    InTerm {
        term: String,
        factor: String,
        #[source]
        source: Box<Error>,
    },

    #[error("key {0} violates its selection rule")]
    SelectionRule(String),

    #[error("the correction expansion needs degree d >= 1, got a degree-0 key {0}")]
    DegreeZero(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("rejected table entries: {}", .0.join("; "))]
    Rejected(Vec<String>),

    #[error("domain not closed under the recursion; frontier keys: {}", .0.join(", "))]
    DomainNotClosed(Vec<String>),

    #[error("inconsistent input: {key} is {first} from {first_source} but {second} from {second_source}")]
    Inconsistent {
        key: String,
        first: String,
        first_source: String,
        second: String,
        second_source: String,
    },

    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid substitution component for x{index}: {reason}")]
    InvalidSubstitution { index: usize, reason: String },

    #[error("series has a nonzero q^0 part")]
    NonPositiveOrder,

    #[error("substitution has no component for variable x{0}")]
    MissingSubstitution(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by malformed or inconsistent input data rather
    /// than I/O.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}
