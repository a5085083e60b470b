use thiserror::Error;

use crate::graph::Rejection;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid sparsity parameters k={k}, l={l}: need k >= 1 and 0 <= l < 3k")]
    InvalidParams { k: usize, l: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("input rejected: {0}")]
    Rejected(Rejection),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("graph has {n} vertices, exhaustive check is limited to {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid generator request: {0}")]
    Generator(String),
}

pub type Result<T> = std::result::Result<T, Error>;
