use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty vector")]
    EmptyVector,

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("matrix is not hermitian (deviation {deviation:e} exceeds {tol:e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unregistered variable `{0}`")]
    UnregisteredVariable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("polynomial fit inconsistent: residual {residual:e}")]
    InconsistentFit { residual: f64 },

    #[error("certificate check `{check}` failed at x = {witness:?}: {detail}")]
    CertificateFailure { check: &'static str, witness: Vec<[f64; 2]>, detail: String },

    #[error(transparent)]
    Replay(#[from] crate::replay::ReplayError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
