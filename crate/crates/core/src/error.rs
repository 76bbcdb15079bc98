use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(VertexId, VertexId),
    #[error("simplex {0:?} is not in the graph")]
    UnknownSimplex(Vec<VertexId>),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("function is not locally injective on edge ({0}, {1})")]
    NotLocallyInjective(VertexId, VertexId),
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("recursion depth {0} exceeds the supported maximum of 4")]
    DimensionLimit(i32),
    #[error("computation budget exceeded: {0}")]
    Budget(String),
    #[error("illegal move at step {step}: {reason}")]
    IllegalMove { step: usize, reason: String },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("eigen solver failed: {0}")]
    Spectral(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
