use thiserror::Error;

/// Failures raised anywhere in the key-rate pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("root {index} of He_{m} did not converge (residual {residual:e})")]
    RootConvergenceFailure {
        m: usize,
        index: usize,
        residual: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("adaptive quadrature did not reach tolerance {tol:e} (estimated error {estimate:e})")]
    QuadratureFailure { tol: f64, estimate: f64 },

    #[error("no key possible: {0}")]
    NoKeyPossible(String),

    #[error("unphysical covariance: {0}")]
    UnphysicalCovariance(String),

    #[error("expected a symmetric 4x4 matrix: {0}")]
    Shape(String),

    #[error("matrix is not in phase-symmetrized block form: {0}")]
    Form(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
