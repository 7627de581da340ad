use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid degree distribution: {0}")]
    InvalidDistribution(String),
    #[error("all edges have degree one; normalization over degrees > 1 is undefined")]
    AllDegreeOne,
    #[error("design rate {0} is not positive")]
    DegenerateRate(f64),
    #[error("invalid component code: {0}")]
    InvalidComponent(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("NaN value at index {0}")]
    NotANumber(usize),
    #[error("probability out of range at index {index}: {value}")]
    ProbabilityOutOfRange { index: usize, value: f64 },
    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudget(String),
    #[error("invalid cluster arrangement: {0}")]
    Arrangement(String),
    #[error("structural error in the partial-weight-2 graph: {0}")]
    Structure(String),
    #[error("node-weight bookkeeping inconsistency: {0}")]
    Bookkeeping(String),
    #[error("infeasible degree optimization: {0}")]
    Infeasible(String),
    #[error("known values contradict the code constraints in component {0}")]
    Contradiction(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
