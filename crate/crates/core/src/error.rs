use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex index {0} out of range")]
    VertexIndex(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("incompatible partitions at entries {0} and {1}")]
    Incompatible(usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("not a cubical automorphism: {0}")]
    NotAutomorphism(String),

    #[error("not treelike: {0}")]
    NotTreelike(String),

    #[error("not a Γ-complex: {0}")]
    NotGammaComplex(String),

    #[error("not extendable: {0}")]
    NotExtendable(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
