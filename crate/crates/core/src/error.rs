use thiserror::Error;

/// Errors raised by geometric operations, scans, and body I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate direction: zero vector")]
    DegenerateDirection,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("C not contained in B (violation {violation:.3e})")]
    NotContained { violation: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error at {path} (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid body spec: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
