use thiserror::Error;

/// Errors raised while building states or evaluating observables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A user-facing parameter lies outside its admissible domain.
    #[error("invalid {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The requested Fock cutoff leaves too much probability in the tail.
    #[error("coherent truncation at n = {cutoff} leaves tail mass {tail:.3e} (limit {limit:.0e})")]
    Truncation {
        cutoff: usize,
        tail: f64,
        limit: f64,
    },

    /// Moment orders larger than the amplitude vector.
    #[error("moment order (s1 = {s1}, s2 = {s2}) exceeds amplitude length {len}")]
    MomentOrder { s1: usize, s2: usize, len: usize },

    /// The parameters select a state with zero norm.
    #[error("state has zero norm: {0}")]
    ZeroNorm(String),

    /// Two series were sampled on different time grids.
    #[error("time grids differ: {0}")]
    GridMismatch(String),

    /// Two states that must share (M, eta) do not.
    #[error("state mismatch: {0}")]
    StateMismatch(String),

    /// The exact oracle only handles small binomial families.
    #[error("oracle domain: {0}")]
    OracleDomain(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for argument-domain errors, false for numerical failures.
    pub fn is_bad_argument(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::MomentOrder { .. } | Error::StateMismatch(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
