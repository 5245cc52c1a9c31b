use thiserror::Error;

/// Errors raised by the dynamics, estimation and probe routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("density matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace is {0}, expected 1")]
    TraceNotUnit(f64),
    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("closed-form solution requires omega = 0 (got {0})")]
    DrivenAnalytic(f64),
    #[error("time must be non-negative (got {0})")]
    NegativeTime(f64),
    #[error("coherence coefficient is singular: |A^2 - K^2| = {0:e}")]
    SingularGamma(f64),
    #[error("exceptional-point solution is singular at b = -1/2 (|2b + 1| = {0:e})")]
    SingularExceptional(f64),
    #[error("trace drifted by {drift:e} at t = {t}; reduce the step size")]
    TraceDrift { drift: f64, t: f64 },
    #[error("state is near-singular (det = {0:e}); use the spectral route")]
    NearSingular(f64),
    #[error("precision bound diverges (Fisher information is zero)")]
    DivergentBound,
    #[error("quantum Fisher information diverges at the exceptional point (omega = {omega}, gamma = {gamma})")]
    ExceptionalPoint { omega: f64, gamma: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
