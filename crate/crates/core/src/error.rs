use thiserror::Error;

/// Errors produced by the solvers, parsers and oracles.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid path order bound k = {0}")]
    InvalidK(usize),

    #[error("{what} is {actual}, exceeding the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("degree bounds at vertex {0} satisfy f > g")]
    InvalidBounds(usize),

    #[error("no factor satisfying the degree bounds exists")]
    Infeasible,

    #[error("short cycles overlap at vertex {0}")]
    OverlappingCycles(usize),

    #[error("component {0} is critical and must be handled as a bare short cycle")]
    CriticalComponent(usize),

    #[error("component {0} has a double anchor and is not balanced")]
    UnbalancedDoubleAnchor(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for building an [`Error::Invariant`].
pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}
