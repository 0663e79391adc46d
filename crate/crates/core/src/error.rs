use thiserror::Error;

use crate::multiset::ContainmentError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("invalid vertex label `{0}`")]
    InvalidLabel(String),
    #[error("self-loop at `{0}` (graphs may not contain loops)")]
    SelfLoop(String),
    #[error("duplicate edge `{0}` -> `{1}`")]
    DuplicateEdge(String, String),
    #[error("graph has {0} vertices; at most 64 are supported")]
    TooManyVertices(usize),
    #[error(transparent)]
    Containment(#[from] ContainmentError),
    #[error("polynomials over different variable sets ({0} and {1} vertices)")]
    UniverseMismatch(usize, usize),
    #[error("integer overflow in exact arithmetic")]
    IntegerOverflow,
    #[error("invalid multifunction: {0}")]
    InvalidMultifunction(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("rewriting did not shrink its input: {0}")]
    NonTermination(String),
    #[error("graph is not a tree with both edge directions")]
    NotATree,
    #[error("check failed: {0}")]
    Assertion(String),
    #[error("invalid syntax: {0}")]
    Syntax(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
