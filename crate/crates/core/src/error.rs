use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The inner product of a Hermitian observable came back with a
    /// non-negligible imaginary part.
    #[error("imaginary residue {0:e} exceeds tolerance")]
    ImaginaryResidue(f64),

    #[error("phase accumulation produced a non-Hermitian element (i^{0})")]
    NonHermitianPhase(u8),

    #[error("{n}-qubit dense sweep exceeds the configured limit of {limit} qubits")]
    ResourceLimit { n: usize, limit: usize },

    #[error("state file: {0}")]
    StateFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
