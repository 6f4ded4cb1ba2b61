use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("index {index} out of range 1..={size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkewSymmetric,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("rule not applicable: {0}")]
    Inapplicable(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("relation check failed: {0}")]
    RelationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
