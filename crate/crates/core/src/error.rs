use thiserror::Error;

/// Errors raised by the algebra, linear algebra and dimension engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An arithmetic operation outside its domain (zero inverse, zero twist scalar, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An API used against its contract (mismatched algebras, boundary degree, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Structural data that fails its invariants.
    #[error("validation error: {0}")]
    Validation(String),
    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),
    /// A computation that would exceed the configured basis budget.
    #[error("resource budget exceeded at degree {degree}: {needed} basis elements > budget {budget}")]
    Resource { degree: i64, needed: u128, budget: u128 },
    /// A hypothesis that the requested route depends on does not hold.
    #[error("hypothesis error: {0}")]
    Hypothesis(String),
    /// An internal consistency check failed (a transcription or logic error).
    #[error("consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
