use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A graph or metric refers to a vertex that does not exist, or carries a
    /// malformed entry.
    #[error("structural error: {0}")]
    Structural(String),

    /// An argument is outside its admissible range.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A restricted window is not a sub-interval of the original window.
    #[error("window of vertex {vertex} is not contained in its original window")]
    Containment { vertex: usize },

    /// The input does not satisfy the precondition of the requested operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No feasible walk exists, or the supplied walk is not feasible.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Instance file could not be parsed.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
