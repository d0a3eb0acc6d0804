use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The log-Sobolev cap exp(exponent) does not fit in an f64. The bound is
    /// vacuous at these constants.
    #[error("LSI cap overflows f64 (exponent {exponent:.4e}); bound vacuous at these constants")]
    CapOverflow { exponent: f64 },

    #[error("privacy target {target} unreachable within {k_max} unlearning steps")]
    BudgetUnreachable { target: f64, k_max: u64 },

    #[error("no feasible noise level: sigma_hi = {sigma_hi} needs more than {k_budget} steps")]
    NoFeasibleSigma { sigma_hi: f64, k_budget: u64 },

    #[error("infeasible budget: {0}")]
    InfeasibleBudget(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
