use thiserror::Error;

use crate::dictionary::Dictionary;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front-ends to pick a stable exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input data (files, series shapes, labels) is unusable.
    Data,
    /// A numerical or algorithmic contract could not be honored.
    Contract,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("window length {m} exceeds series length {n}")]
    WindowTooLarge { m: usize, n: usize },

    #[error("window length {m} is too small (minimum 2)")]
    WindowTooSmall { m: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteInput { index: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("series of length {n} is too short; at least {required} samples are required")]
    SeriesTooShort { n: usize, required: usize },

    #[error("window length {requested} does not match dictionary window length {dictionary}")]
    WindowMismatch { dictionary: usize, requested: usize },

    #[error("dictionary has no segments")]
    EmptyDictionary,

    #[error("dictionary segment at {start} has length {length}, shorter than window length {m}")]
    SegmentTooShort { start: usize, length: usize, m: usize },

    #[error("dictionary was learned from a series of length {expected}, got {found}")]
    SourceMismatch { expected: usize, found: usize },

    #[error("every candidate subsequence is excluded before the stop rule fired ({} cores selected)", partial.core_starts.len())]
    NoProgress { partial: Box<Dictionary> },

    #[error("iteration cap of {iterations} reached before the stop rule fired")]
    IterationCapExceeded { iterations: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix profile is empty")]
    EmptyProfile,

    #[error("labels contain a single class; AUC is undefined")]
    DegenerateLabels,

    #[error("parse error at line {line}{}: {message}", field.as_ref().map(|f| format!(", field `{f}`")).unwrap_or_default())]
    Parse {
        line: usize,
        field: Option<String>,
        message: String,
    },

    #[error("unsupported format version: {message}")]
    Version { message: String },

    #[error("schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_field(line: usize, field: &str, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            field: Some(field.to_string()),
            message: message.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NoProgress { .. }
            | Error::IterationCapExceeded { .. }
            | Error::EmptyProfile
            | Error::InvalidConfig(_)
            | Error::WindowTooSmall { .. } => ErrorClass::Contract,
            _ => ErrorClass::Data,
        }
    }
}
