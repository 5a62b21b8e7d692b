use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: &'static str },

    #[error("parallel composition at offset {offset} has {count} children, expected 2 or 3")]
    Arity { offset: usize, count: usize },

    #[error("chain length must be at least 1 (offset {offset})")]
    ZeroLength { offset: usize },

    #[error("vertex {vertex} has degree {degree}, maximum is 4")]
    DegreeViolation { vertex: u32, degree: usize },

    #[error("no terminal-joining reference edge and a dummy edge would give vertex {vertex} degree {degree}")]
    InfeasibleRooting { vertex: u32, degree: usize },

    #[error("P-node {node} with pole degrees {detail} matches no subtype")]
    UnclassifiablePNode { node: u32, detail: String },

    #[error("graph is not a two-terminal series-parallel graph: {0}")]
    NotSeriesParallel(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph has {edges} edges, above the enumeration cap of {cap}")]
    CapExceeded { edges: usize, cap: usize },

    #[error("constraint graph has a cycle")]
    CycleInConstraintGraph,

    #[error("representation is not drawable: {0}")]
    InvalidRepresentation(String),

    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),

    #[error("instance is not rectilinear planar")]
    NotRectilinear,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
