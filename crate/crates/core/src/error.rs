use thiserror::Error;

/// Errors raised by the numeric core, the algorithms, and the experiment runner.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("gradient oracle budget of {budget} queries exhausted")]
    BudgetExhausted { budget: usize },

    #[error("negative Bregman divergence {value:e}: objective is not convex or its gradient is wrong")]
    ConvexityViolation { value: f64 },

    #[error("domain has infinite diameter; this method needs a bounded domain")]
    InfiniteDiameter,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
