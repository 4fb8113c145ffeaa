use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid box domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("observation at {0:?} duplicates an existing sample")]
    DuplicateObservation(Vec<f64>),

    #[error("operation requires at least one observation")]
    EmptyObservations,

    #[error("no candidate points supplied")]
    EmptyCandidates,

    #[error(
        "Gram matrix is not positive definite at pivot {pivot} with jitter {jitter:e}; \
         try a larger jitter"
    )]
    NotPositiveDefinite { pivot: usize, jitter: f64 },

    #[error("point {0:?} lies outside the domain")]
    OutOfDomain(Vec<f64>),

    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),

    #[error("constant table, line {line}: {message}")]
    ConstantTable { line: usize, message: String },

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn dims(expected: usize, found: usize) -> Self {
        Error::DimensionMismatch { expected, found }
    }
}
