use thiserror::Error;

/// Errors produced by the bounds machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("root finder did not reach tolerance {tol:e} for a degree-{degree} polynomial")]
    NonConvergence { degree: usize, tol: f64 },
    #[error("every grid point of the domain has zero weight")]
    EmptyDomain,
    #[error("point {0} lies within the estimated support; the Leja gap estimator is invalid there")]
    PointInSupport(String),
    #[error("mode unavailable: {0}")]
    ModeUnavailable(String),
    #[error("length mismatch: {left} points but {right} values")]
    LengthMismatch { left: usize, right: usize },
    #[error("no nonzero integer polynomial has norm within budget {0:e}")]
    BudgetTooSmall(f64),
    #[error("interpolation nodes {0} and {1} coincide")]
    SingularNodes(usize, usize),
    #[error("inconsistent results: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<V> = std::result::Result<V, Error>;

pub(crate) fn domain_err<V>(msg: impl Into<String>) -> Result<V> {
    Err(Error::Domain(msg.into()))
}
