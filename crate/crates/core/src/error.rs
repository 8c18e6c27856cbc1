use thiserror::Error;

/// Errors produced by graph construction, field calculus and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid shape entry {0}: entries must be -1 or +1")]
    InvalidEntry(i64),

    #[error("order {k} is outside the supported range 1..={max} for {what}")]
    Capacity { k: u32, max: u32, what: &'static str },

    #[error("walker state {0:?} violates the unit-gap constraint")]
    NotInStateSpace(Vec<i64>),

    #[error("fields live on graphs of different order ({left} vs {right})")]
    Incompatible { left: u32, right: u32 },

    #[error("flux endpoints must be disjoint vertex sets")]
    OverlappingSets,

    #[error("iterative solve did not converge after {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("singular linear system")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
