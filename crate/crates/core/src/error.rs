use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// Variants split into two families: bad requests (`InvalidInput`, `CutoffExceeded`,
/// `KTooSmall`, `ResourceLimit`) and invariant violations discovered while computing
/// (`DSquaredNonzero`, `IllDefined`, `RangeIncomplete`, `OracleMismatch`).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("cutoff exceeded: {0}")]
    CutoffExceeded(String),
    #[error("k too small: {0}")]
    KTooSmall(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("differential does not square to zero: {0}")]
    DSquaredNonzero(String),
    #[error("induced differential is not well defined: {0}")]
    IllDefined(String),
    #[error("range-incomplete: {0}")]
    RangeIncomplete(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
}

impl Error {
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::DSquaredNonzero(_)
                | Error::IllDefined(_)
                | Error::RangeIncomplete(_)
                | Error::OracleMismatch(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => { $crate::error::Error::InvalidInput(format!($($arg)*)) };
}
pub(crate) use invalid;
