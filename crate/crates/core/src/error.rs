use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("generator index {letter} out of range for {strands} strands")]
    IndexOutOfRange { letter: i32, strands: usize },
    #[error("braid must have at least one strand")]
    NoStrands,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid normal form: {0}")]
    InvalidNormalForm(String),
    #[error("{what} limit exceeded: {actual} > {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("chain represents the zero class")]
    ZeroClass,
    #[error("incompatible request: {0}")]
    Incompatible(String),
    #[error("invalid orientation: {0}")]
    InvalidOrientation(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("undetermined-without-mirror-nf")]
    Undetermined,
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
