use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("assumption violated: {0}")]
    AssumptionViolation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no minorant with halfwidth {delta}: kernel vanishes inside [-{delta}, {delta}] (shrink delta)")]
    NoMinorant { delta: f64 },

    #[error("coefficient horizon too small: need {needed}, have {have}")]
    InsufficientHorizon { needed: f64, have: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("kernel under-resolved: {0}")]
    Resolution(String),

    #[error("dt = {dt} exceeds stable step {dt_stable}")]
    Stability { dt: f64, dt_stable: f64 },

    #[error("front reached the guard zone at t = {t}; widen the grid")]
    DomainExhausted { t: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not certified: {0}")]
    NotCertified(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
