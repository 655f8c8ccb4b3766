use thiserror::Error;

/// Errors raised by constructors, parsers and verifiers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },

    #[error("loop ({0}, {0}) rejected: relations must be irreflexive")]
    Loop(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("invalid witness: {0}")]
    WitnessInvalid(String),

    #[error("bound error: {0}")]
    Bound(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("invalid gadget scheme: {0}")]
    Scheme(String),
}

pub type Result<T> = std::result::Result<T, Error>;
