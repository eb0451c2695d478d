use thiserror::Error;

/// Failure while reading an interchange document.
///
/// `at` is a dotted path into the document (`delta.a[3]`) for semantic
/// errors; syntax errors carry the line and column reported by the JSON
/// reader.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{at}: missing required field")]
    MissingField { at: String },
    #[error("{at}: expected {expected}")]
    WrongType { at: String, expected: &'static str },
    #[error("{at}: expected {expected} entries, found {found}")]
    Arity {
        at: String,
        expected: usize,
        found: usize,
    },
    #[error("{at}: state {state} out of range (n = {n})")]
    StateOutOfRange { at: String, state: u64, n: usize },
    #[error("{at}: cost must be a positive integer")]
    NonPositiveCost { at: String },
    #[error("{at}: undefined transition not allowed in a weighted automaton")]
    NullInWeighted { at: String },
    #[error("{at}: letter {letter:?} is not in the alphabet")]
    UnknownLetter { at: String, letter: String },
    #[error("{at}: duplicate letter {letter:?}")]
    DuplicateLetter { at: String, letter: String },
    #[error("{at}: unknown field")]
    UnknownField { at: String },
    #[error("{at}: {message}")]
    Invalid { at: String, message: String },
}

/// Every error the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    InputDomain(String),
    #[error("capacity exceeded: {what} is {actual}, limit is {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("strategy error: {0}")]
    Strategy(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("search cancelled")]
    Cancelled,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::Capacity {
            what,
            actual,
            limit,
        })
    } else {
        Ok(())
    }
}
