use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter domain: {0}")]
    ParamDomain(String),

    #[error("domain: {0}")]
    Domain(String),

    #[error("sampling produced a non-finite value at x = {x}: {context}")]
    Sampling { x: f64, context: String },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("iteration limit reached after {iterations} iterations (last error {last_error:.3e})")]
    IterationLimit { iterations: usize, last_error: f64 },

    #[error("degree violation: {0}")]
    DegreeViolation(String),

    #[error("degenerate phi: {0}")]
    DegeneratePhi(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
