use std::path::PathBuf;

/// Errors raised across the crate.
///
/// `InvalidInput`-style variants describe caller mistakes (bad arguments);
/// `Consistency` means a formula produced a value it never should, and is
/// treated as an internal fault by callers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a negative discriminant: {0} (must be < 0 and congruent to 0 or 1 mod 4)")]
    NotDiscriminant(i64),

    #[error("invalid curve label (D={disc}, N={level}): {reason}")]
    InvalidLabel { disc: u64, level: u64, reason: String },

    #[error("m={m} must be a Hall divisor of DN={dn} with m > 1")]
    NotHallDivisor { m: u64, dn: u64 },

    #[error("consistency fault: {0}")]
    Consistency(String),

    #[error("class number cache {path}: {reason}")]
    Cache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for faults that indicate a bug or corrupted state rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_) | Error::Cache { .. } | Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
