use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
    #[error("invalid exponent p = {0}; expected p >= 1")]
    InvalidExponent(f64),
    #[error("invalid trace weight {0}; expected a positive finite value")]
    InvalidTraceWeight(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),
    #[error("unknown group family `{0}`")]
    UnknownFamily(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("group of order {0} exceeds the supported maximum of {1}")]
    GroupTooLarge(usize, usize),
    #[error("elements belong to different groups")]
    GroupMismatch,
    #[error("symbol has length {got}, group has order {expected}")]
    SymbolLength { expected: usize, got: usize },
    #[error("spectrum of random element could not be split after {0} attempts")]
    DegenerateSpectrum(usize),
    #[error("no nonzero disjoint pair found after {0} attempts")]
    ExhaustedRetries(usize),
    #[error("the one-dimensional algebra has no nonzero disjoint pairs")]
    TrivialAlgebra,
    #[error("trial count must be at least 1")]
    InvalidTrials,
    #[error("map is not separating: {0}")]
    NotSeparating(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
