use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial must be monic with integer coefficients: {0}")]
    NotMonicInteger(String),
    #[error("coefficients are not {p}-integral: {poly}")]
    NotPIntegral { p: u64, poly: String },
    #[error("polynomial is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("polynomial is reducible over Q: {0}")]
    Reducible(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ultrametric violation: {0}")]
    Ultrametric(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
