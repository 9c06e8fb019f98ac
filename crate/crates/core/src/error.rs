use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("family does not commute (max commutator {max_commutator:.3e})")]
    NonCommuting { max_commutator: f64 },

    #[error("operator is not a projector (deviation {deviation:.3e})")]
    NotProjector { deviation: f64 },

    #[error("state is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("invalid gate parameters: {0}")]
    InvalidParams(String),

    #[error("malformed controlled-unitary form: {0}")]
    MalformedForm(String),

    #[error("malformed protocol: {0}")]
    MalformedProtocol(String),

    #[error("measurement violates completeness (deviation {deviation:.3e})")]
    Incomplete { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
