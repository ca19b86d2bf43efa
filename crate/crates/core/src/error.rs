use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// The two lowest eigenvalues are closer than the configured gap tolerance.
    #[error("degenerate ground state{}: gap {gap:e} below tolerance {tol:e}", lambda.map(|l| format!(" at lambda = {l}")).unwrap_or_default())]
    DegenerateGroundState {
        lambda: Option<f64>,
        gap: f64,
        tol: f64,
    },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed CSV at row {row}: {msg}")]
    Csv { row: usize, msg: String },

    /// Two detectors that must agree produced different answers.
    #[error("consistency defect: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
