use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("ring context mismatch: {left} vs {right} variables")]
    ContextMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not an IA automorphism: {0}")]
    NotIa(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("not a member: {0}")]
    NotMember(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("corrupt file: {0}")]
    Corrupt(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
