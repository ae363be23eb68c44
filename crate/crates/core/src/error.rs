use thiserror::Error;

/// Errors produced by the simulation and estimation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace:.15}, expected 1")]
    BadTrace { trace: f64 },

    #[error("state is not normalized (norm² = {norm_sqr:.15})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Kraus operators are not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(invalid(name, format!("must be finite, got {value}")))
    }
}

pub(crate) fn check_eta(name: &'static str, eta: f64) -> Result<f64> {
    if eta.is_finite() && eta > 0.0 && eta <= 1.0 {
        Ok(eta)
    } else {
        Err(invalid(
            name,
            format!("transmissivity must lie in (0, 1], got {eta}"),
        ))
    }
}
