use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by graph construction, parsing, model building and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graphs with more than {max} vertices are not supported (got {n})")]
    TooManyVertices { n: usize, max: usize },

    #[error("{0} is undefined for the empty graph")]
    EmptyGraph(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("binary pair violates membership: {0}")]
    NotInB(String),

    #[error("subset pair violates membership: {0}")]
    NotInT(String),

    #[error("model needs at least 2 vertices (got {0})")]
    ModelTooSmall(usize),

    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),

    #[error("no fractional binary variable to branch on")]
    NothingToBranch,

    #[error("LP engine failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numerical(_) | Error::NothingToBranch)
    }
}
