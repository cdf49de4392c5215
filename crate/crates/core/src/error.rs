use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    /// Malformed complex data: duplicate ids, dangling references, entries
    /// whose y-power disagrees with the gradings, and so on.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("flavor error: {0}")]
    Flavor(String),

    #[error("argument error: {0}")]
    Argument(String),

    /// A finite window was requested with an infinite endpoint.
    #[error("window ({0}, {1}] has an infinite endpoint; use the graded solver instead")]
    InfiniteEndpoint(String, String),

    #[error("map does not induce a window map: {0}")]
    LevelViolation(String),

    #[error("critical endpoint: {0}")]
    CriticalEndpoint(String),

    #[error("insufficient tail: {0}")]
    InsufficientTail(String),

    #[error("not an approximate equivariant cycle: {0}")]
    NotApproximateCycle(String),

    #[error("invalid complex: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
