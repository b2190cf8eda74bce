use thiserror::Error;

/// Syntax error in polynomial input, with the byte offset where it occurred.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {expected}, found {found}")]
pub struct ParseError {
    pub position: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },

    #[error("denominator is the zero polynomial")]
    ZeroDenominator,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerator and denominator share the factor {witness}")]
    NotCoprime { witness: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A self-check failed; this indicates a bug or a numerical breakdown,
    /// never a problem with the user's input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
