use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("negative weight {weight} on vertex {vertex}")]
    NegativeWeight { vertex: usize, weight: String },

    #[error("requested measure {requested} exceeds available {available}")]
    InsufficientMeasure { requested: String, available: String },

    /// Hall's condition fails on the vertex subset `witness`.
    #[error("Hall condition violated on {witness:?}: union of available colours {available} < demand {demand}")]
    HallViolation {
        witness: Vec<usize>,
        available: String,
        demand: String,
    },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("graph is not eligible: {0}")]
    Eligibility(String),

    #[error("sampled subgraph violates the clique-partition degree hypothesis: {0}")]
    AharoniHypothesis(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
