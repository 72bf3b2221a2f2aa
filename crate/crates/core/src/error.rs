use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant to an exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} outside the probability domain [0, 1]")]
    Domain { value: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("not a permutation of 1..={len}: {detail}")]
    InvalidPermutation { len: usize, detail: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported shape {m}x{n}: {reason}")]
    UnsupportedShape { m: usize, n: usize, reason: String },

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(char),

    #[error("entries {first} and {second} tie within tolerance ({a} vs {b})")]
    Tie {
        first: usize,
        second: usize,
        a: f64,
        b: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("class index {index} outside 1..={count}")]
    ClassIndex { index: usize, count: usize },

    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("checkpoint does not match the requested run: {0}")]
    CheckpointMismatch(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
