use thiserror::Error;

/// Errors raised by the set, transform and search routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension {n} exceeds dense capacity (max {max})")]
    Capacity { n: u32, max: u32 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("element {value:#x} out of range for n = {n}")]
    OutOfRange { value: u64, n: u32 },
    #[error("set is empty")]
    EmptySet,
    #[error("zero vector is {0}")]
    ZeroVector(&'static str),
    #[error("density must be positive")]
    NonPositiveDensity,
    #[error("coset representative {rep:#x} is not canonical for this subspace")]
    NotACoset { rep: u32 },
    #[error("vectors do not form a basis (rank {rank} < {n})")]
    NotABasis { rank: u32, n: u32 },
    #[error("subspace is trivial, no witness vector exists")]
    NoWitness,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
