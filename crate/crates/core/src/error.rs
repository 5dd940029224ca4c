use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad subsystem index")]
    BadSubsystemIndex,
    #[error("not Hermitian")]
    NotHermitian,
    #[error("not unitary")]
    NotUnitary,
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("degenerate reference")]
    DegenerateReference,
    #[error("negative eigenvalue {0}")]
    NegativeEigenvalue(f64),
    #[error("Jacobi eigensolver did not converge in {0} sweeps")]
    NoConvergence(usize),
    #[error("Kraus operators are not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("no sign change")]
    NoSignChange,
    #[error("non-finite objective at {0}")]
    NonFinite(f64),
    #[error("transcript identity violated: {0}")]
    TranscriptIdentity(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("channel json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(p.clamp(0.0, 1.0))
}
