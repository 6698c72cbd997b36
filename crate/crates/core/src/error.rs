use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    Loop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge ({0}, {1}) joins two vertices on the same side")]
    SideViolation(usize, usize),

    #[error("side labels have length {got}, expected {expected}")]
    SideLength { got: usize, expected: usize },

    #[error("graph has no side labels")]
    MissingSides,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("at least one firefighter is required (k = 0)")]
    NoFirefighters,

    #[error("illegal protection: {0}")]
    IllegalProtection(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph on {n} vertices exceeds the limit of {limit} for this operation")]
    GraphTooLarge { n: usize, limit: usize },

    #[error("no simple graph after {tries} pairings")]
    RejectionCapExceeded { tries: usize },

    #[error("vertex {vertex} is not in class {class}")]
    NotInClass { vertex: usize, class: String },

    #[error("density 2m/n = {density} exceeds tau_k - eps = {limit}")]
    DensityPrecondition { density: String, limit: String },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("closed form produced a non-integer value {0}")]
    NonInteger(String),

    #[error("pairing size mismatch: expected {expected} points, got {got}")]
    SizeMismatch { expected: usize, got: usize },
}
