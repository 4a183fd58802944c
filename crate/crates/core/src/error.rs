use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DbiError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },
    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not anti-Hermitian (max deviation {0:e})")]
    NotAntiHermitian(f64),
    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("operator is not diagonal (max off-diagonal entry {0:e})")]
    NotDiagonal(f64),
    #[error("state vector is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("Jacobi eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("unknown Pauli letter {0:?}")]
    UnknownPauli(char),
    #[error("cost function {0} needs reference data that was not supplied")]
    MissingReference(&'static str),
    #[error("energy variance is negative beyond round-off ({0:e})")]
    NegativeVariance(f64),
    #[error("no admissible duration found in (0, {s_max}]")]
    NoAdmissibleDuration { s_max: f64 },
    #[error("{qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, DbiError>;
