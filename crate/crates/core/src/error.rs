use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// `Parse` is reserved for malformed input text; everything else is a
/// precondition or resource failure on well-formed data.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("unknown token `{0}`")]
    UnknownToken(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("substitution is not prolongable on `{0}`")]
    NotProlongable(String),

    #[error("letters never occur in the fixed point: {}", .0.join(", "))]
    Unreachable(Vec<String>),

    #[error("map is not a coding: {0}")]
    NotACoding(String),

    #[error("substitution is erasing; normalize the system first")]
    Erasing,

    #[error("letter `{0}` is mortal")]
    MortalLetter(String),

    #[error("requested {requested} letters, budget is {budget}")]
    Budget { requested: usize, budget: usize },

    #[error("the generated sequence is finite ({0} letters)")]
    FiniteSequence(usize),

    #[error("matrix error: {0}")]
    Matrix(String),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("normalization failed: {0}")]
    Normalize(String),

    #[error("reduction failed: {0}")]
    Reduce(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::UnknownToken(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
