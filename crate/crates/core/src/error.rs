use thiserror::Error;

use crate::scheme::SchemeKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameters {0} and {1} are not co-prime (gcd = {2})")]
    NotCoprime(u64, u64, u64),
    #[error("multi-level scheme needs at least two levels, got {0}")]
    TooFewLevels(usize),
    #[error("period count must be at least 1, got {0}")]
    InvalidPeriods(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation `{op}` is not supported for {kind:?} schemes")]
    UnsupportedScheme { op: &'static str, kind: SchemeKind },
    #[error("lag table is not symmetric: z({lag}) = {pos} but z({neg_lag}) = {neg}", neg_lag = -lag)]
    AsymmetricLagTable { lag: i64, pos: u64, neg: u64 },
    #[error("window has no local minimum on (0, pi]")]
    NoMinimumFound,
    #[error("normalized frequency {0} is outside (0, 1)")]
    FrequencyOutOfRange(f64),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("input must be positive: {0}")]
    NonPositiveInput(String),
}
