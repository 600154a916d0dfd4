use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation n_trunc={n_trunc} leaves tail mass {tail:.3e} above {threshold:.1e}")]
    TruncationTooSmall {
        n_trunc: usize,
        tail: f64,
        threshold: f64,
    },

    #[error("state is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("amplitude pair violates |alpha|^2 + |beta|^2 = 1 (got {sum})")]
    AmplitudeSum { sum: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("density matrix trace {trace} is not 1")]
    Trace { trace: f64 },

    #[error("density matrix has eigenvalue {value:.3e} below the clipping tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrator step rejected at t={t}: trace drift {drift:.3e}")]
    StepRejected { t: f64, drift: f64 },

    #[error("invariant breach: {0}")]
    Invariant(String),

    #[error("wave packet reached the grid edge at t={t}: marginal density {density:.3e} on axis {axis}")]
    EdgeProximity { t: f64, axis: char, density: f64 },

    #[error("scenario file line {line}: {message}")]
    Scenario { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
