//! Error types shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error category, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// The request itself is invalid (bad sizes, ranges, configuration).
    Validation,
    /// The input data is malformed or violates a data invariant.
    Data,
    /// Anything that should not happen given valid requests and data.
    Internal,
}

impl ErrorCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::Validation => "validation",
            ErrorCategory::Data => "data",
            ErrorCategory::Internal => "internal",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("sample set is empty")]
    EmptySample,

    #[error("spread is degenerate for a sample of size {n} (constant values or n < 2)")]
    DegenerateSpread { n: usize },

    #[error("subsample size {k} exceeds population size {n}")]
    SizeExceedsPopulation { k: usize, n: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("exhaustive enumeration of {n}^{n} resamples exceeds the cap of {cap}")]
    TooLargeForEnumeration { n: usize, cap: u64 },

    #[error("percentile of an empty list is undefined")]
    EmptyList,

    #[error("percentile rank {q} is outside [0, 1]")]
    QOutOfRange { q: f64 },

    #[error("invalid grid axis: {0}")]
    InvalidGridAxis(String),

    #[error("invalid planner target: {0}")]
    InvalidTarget(String),

    #[error("label set is empty")]
    EmptyLabelSet,

    #[error("label set contains the background label 0")]
    BackgroundInLabelSet,

    #[error("volume dimensions differ: {a:?} vs {b:?}")]
    DimMismatch {
        a: (u32, u32, u32),
        b: (u32, u32, u32),
    },

    #[error("Dice is undefined: both masks are empty")]
    UndefinedDice,

    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },

    #[error("duplicate subject id {subject_id:?} (row {row})")]
    DuplicateSubject { subject_id: String, row: usize },

    #[error("non-finite value for subject {subject_id:?} (row {row})")]
    NonFiniteValue { subject_id: String, row: usize },

    #[error(
        "value {value} for subject {subject_id:?} is outside the declared bounds [{lo}, {hi}]"
    )]
    OutOfBounds {
        subject_id: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Category of the error, stable across message wording changes.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::EmptySample
            | Error::DegenerateSpread { .. }
            | Error::SizeExceedsPopulation { .. }
            | Error::InvalidConfig(_)
            | Error::TooLargeForEnumeration { .. }
            | Error::EmptyList
            | Error::QOutOfRange { .. }
            | Error::InvalidGridAxis(_)
            | Error::InvalidTarget(_)
            | Error::EmptyLabelSet
            | Error::BackgroundInLabelSet => ErrorCategory::Validation,
            Error::DimMismatch { .. }
            | Error::UndefinedDice
            | Error::ParseError { .. }
            | Error::DuplicateSubject { .. }
            | Error::NonFiniteValue { .. }
            | Error::OutOfBounds { .. }
            | Error::InvalidSample(_)
            | Error::Io(_) => ErrorCategory::Data,
        }
    }
}
