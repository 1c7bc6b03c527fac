use thiserror::Error;

/// Errors raised by the operator kernel, the expectation machinery, the
/// norm evaluators and the inequality checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator dimension must be at least 1")]
    EmptyDimension,

    #[error("operator has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("invalid exponent {value}: must satisfy {constraint}")]
    InvalidExponent { value: f64, constraint: &'static str },

    #[error("invalid power {0}: must be a positive finite real")]
    InvalidPower(f64),

    #[error("operator sequence is empty")]
    EmptySequence,

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid subalgebra: {0}")]
    InvalidSubalgebra(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("sequence is not adapted (residual {residual:e})")]
    NotAdapted { residual: f64 },

    #[error("not a family of mutually orthogonal projections: {0}")]
    NotProjectionFamily(String),

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("unknown sample kind `{0}`")]
    UnknownSampleKind(String),

    #[error("parameters outside the supported range: {0}")]
    OutOfRange(String),

    #[error("search failed: {0}")]
    Search(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
