use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not invertible: {0}")]
    NonInvertible(String),
    #[error("degenerate lattice: {0}")]
    Degenerate(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("not vanishing: {0}")]
    NotVanishing(String),
    #[error("pole error: {0}")]
    Pole(String),
    #[error("malformed Jacobi form: {0}")]
    MalformedJacobi(String),
    #[error("inconsistent diagonal: {0}")]
    InconsistentDiagonal(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
