use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is disconnected: nodes {second_component:?} are unreachable from node 0")]
    Disconnected { second_component: Vec<usize> },

    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("self-loop at node {0}")]
    SelfLoop(usize),

    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(usize, usize),

    #[error("edge ({0}, {1}) not present")]
    MissingEdge(usize, usize),

    #[error("invalid weight {0}: weights must be finite and strictly positive")]
    InvalidWeight(f64),

    #[error("graph has {n} nodes; exhaustive enumeration is limited to {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("graph is not a tree: {0}")]
    NotATree(String),

    #[error("operation requires an unweighted graph")]
    Weighted,

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("random walk exceeded {cap} steps")]
    StepCapExceeded { cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("topology constraint violated: {0}")]
    Constraint(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
