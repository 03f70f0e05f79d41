use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("scalar outside domain: {0}")]
    ScalarOutsideDomain(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("{op} is not supported over {domain}")]
    UnsupportedDomain { op: &'static str, domain: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("rank {rank} exceeds degree of vertex {vertex}")]
    RankExceedsDegree { vertex: usize, rank: u64 },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
