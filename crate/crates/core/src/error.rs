use thiserror::Error;

/// Errors surfaced by the library. Parse errors carry a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible quadratic fields: sqrt({0}) vs sqrt({1})")]
    IncompatibleFields(String, String),
    #[error("radicand {0} is too large to reduce to square-free form")]
    RadicandTooLarge(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("vertex {0} out of range for graph with {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("instance too large for exhaustive search: {0} > {1}")]
    SizeCutoff(usize, usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
