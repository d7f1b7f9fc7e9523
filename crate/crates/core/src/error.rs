use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vertex {vertex} is not part of the graph: {reason}")]
    InvalidVertex { vertex: VertexId, reason: String },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation window of depth {depth} is too small; depth >= {required} is required")]
    WindowTooSmall { depth: usize, required: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit status the CLI reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}
