use crate::Label;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("duplicate particle label {0}")]
    DuplicateLabel(Label),

    #[error("unknown particle label {0}")]
    UnknownLabel(Label),

    #[error("invalid measurement basis: {0}")]
    InvalidBasis(String),

    #[error("invalid spin direction ({0}, {1}, {2})")]
    InvalidDirection(f64, f64, f64),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("expected {expected} qubits, got {got}")]
    WrongQubitCount { expected: usize, got: usize },

    #[error("subsystem is not in a pure state (purity {0})")]
    NotPure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
