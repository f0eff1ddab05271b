use crate::graph::EdgeRef;

/// Why a graph6 string could not be decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Graph6ErrorKind {
    Truncated,
    MalformedHeader,
    OutOfRangeByte(u8),
    TrailingData,
}

impl std::fmt::Display for Graph6ErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Graph6ErrorKind::Truncated => write!(f, "truncated input"),
            Graph6ErrorKind::MalformedHeader => write!(f, "malformed size header"),
            Graph6ErrorKind::OutOfRangeByte(b) => write!(f, "byte {b} outside 63..=126"),
            Graph6ErrorKind::TrailingData => write!(f, "trailing data after bitstream"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph6: {kind} at byte offset {offset}")]
    Graph6 { offset: usize, kind: Graph6ErrorKind },

    #[error("edge list line {line}: {message}")]
    EdgeList { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeRef),

    #[error("{0} is not an edge of the graph")]
    NotAnEdge(EdgeRef),

    #[error("{n} vertices exceeds the cap of {cap}")]
    TooManyVertices { n: usize, cap: usize },

    #[error("invalid clique tuple: {0}")]
    InvalidTuple(String),

    #[error("invalid color set: {0}")]
    InvalidColorSet(String),

    #[error("coloring does not match the graph: {0}")]
    ColoringMismatch(String),

    #[error("partial coloring is not total")]
    PartialColoring,

    #[error("pre-colored edges already contain a monochromatic K_{size} in color {color}: {clique:?}")]
    PartialViolates {
        color: u8,
        size: usize,
        clique: Vec<usize>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: cap of {cap} exceeded")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),

    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),

    #[error("invalid color pattern: {0}")]
    InvalidPattern(String),

    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
