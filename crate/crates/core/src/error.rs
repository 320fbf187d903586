use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("metric is not positive definite")]
    Definiteness,

    /// A structural invariant of a model failed; `invariant` names it.
    #[error("invariant `{invariant}` failed (residual {residual:e})")]
    Invariant { invariant: String, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency: {what} disagree by {residual:e}")]
    Consistency { what: String, residual: f64 },

    #[error("lookup error: {0}")]
    Lookup(String),

    #[error("integrability error: {0}")]
    Integrability(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
