use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0}")]
    OutOfRange(String),

    #[error("{n} qubits exceeds the dense size limit of {max} (set STABWIT_MAX_QUBITS to raise it)")]
    SizeOverflow { n: usize, max: usize },

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("noise threshold undefined: {0}")]
    UndefinedThreshold(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
