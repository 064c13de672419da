use thiserror::Error;

/// Errors raised by the p-adic, word, series and period layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime (got {0})")]
    InvalidPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("division by a value that is zero at its precision")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision must be at least 1")]
    InvalidPrecision,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("letter '{0}' is not in the alphabet")]
    UnknownLetter(char),
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(String, String),
    #[error("weight cap mismatch: {0} vs {1}")]
    CapMismatch(usize, usize),
    #[error("word of weight {weight} exceeds the weight cap {cap}")]
    WeightOverflow { weight: usize, cap: usize },
    #[error("constant term is not invertible")]
    NotInvertible,
    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),
    #[error("insufficient term bound: {needed} terms needed, {given} given")]
    InsufficientTerms { needed: usize, given: usize },
    #[error("unsupported basepoint geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("solver failed at weight {weight}: {message}")]
    SolverFailure { weight: usize, message: String },
    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
