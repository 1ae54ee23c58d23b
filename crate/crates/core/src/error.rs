use thiserror::Error;

/// Errors produced by grid construction, kernel evaluation, sampling and
/// estimation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("time grid must start at 0, got {0}")]
    OriginMissing(f64),
    #[error("time grid must be strictly increasing: times[{index}] = {value} does not exceed its predecessor by more than 1e-12")]
    NotIncreasing { index: usize, value: f64 },
    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("parameter {name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("kernel arguments must be finite and non-negative, got t={t}, s={s}")]
    BadKernelArgs { t: f64, s: f64 },
    #[error("grid needs at least {needed} points, got {got}")]
    GridTooSmall { needed: usize, got: usize },
    #[error("need at least {needed} paths, got {got}")]
    TooFewPaths { needed: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPsd(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("candidate covariance violates the increment-variance constraint by {0}")]
    InfeasibleCandidate(f64),
    #[error("dataset invalid: {0}")]
    BadDataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
