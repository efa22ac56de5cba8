use thiserror::Error;

/// Errors raised by model construction, time evolution and analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("disorder strength must be non-negative, got {0}")]
    NegativeDisorder(f64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("site {site} out of range for a chain of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("sector with {n_up} up spins does not exist for {n_sites} sites")]
    InvalidSector { n_sites: usize, n_up: usize },
    #[error("operator leaves magnetization sector")]
    LeavesSector,
    #[error("states live in different bases")]
    BasisMismatch,
    #[error("dimension {dim} exceeds the dense cap {cap}; use the Krylov propagator")]
    DenseCapExceeded { dim: usize, cap: usize },
    #[error("eigensolver failed with info = {0}")]
    Eigensolver(i32),
    #[error("Krylov evolution did not converge (estimated error {estimate:e})")]
    KrylovNonConvergence { estimate: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("anisotropy {0} outside the allowed range [0, 2)")]
    AnisotropyOutOfRange(String),
    #[error("pulse sequence is invalid: {0}")]
    InvalidSequence(String),
    #[error("evolution time {time} is not a multiple of the cycle time {cycle}")]
    NotCycleMultiple { time: f64, cycle: f64 },
    #[error("not enough data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
