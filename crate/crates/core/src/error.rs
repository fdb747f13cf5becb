use thiserror::Error;

/// Errors raised by the numerical layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian: ‖H − H*‖_F = {residual:e}")]
    NotHermitian { residual: f64 },

    #[error("{what} not strictly positive: λ_min = {lambda_min:e}")]
    NotPositive { what: String, lambda_min: f64 },

    #[error("domain error: {function} evaluated at {value:e} outside {domain}")]
    Domain {
        function: String,
        value: f64,
        domain: String,
    },

    #[error("h is not positive on the spectrum: h({mu:e}) = {value:e}")]
    NonPositiveH { mu: f64, value: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NonConvergence { sweeps: usize, off: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
