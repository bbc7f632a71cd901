use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("node {0} out of range")]
    NodeOutOfRange(usize),

    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(usize, usize),

    #[error("node {0} is isolated")]
    IsolatedNode(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("brute force limit: {0}")]
    BruteForceLimit(String),

    #[error("no edges")]
    NoEdges,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("invalid block model: {0}")]
    InvalidSbm(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("empty set")]
    EmptySet,

    #[error("node sets differ: {0}")]
    NodeSetMismatch(String),

    #[error("empty cover")]
    EmptyCover,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by malformed or unreadable input, as opposed to inputs
    /// that are well-formed but violate an operation's preconditions.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Parse { .. })
    }
}
