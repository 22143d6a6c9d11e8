use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),

    #[error("loop edge at vertex {0}")]
    LoopEdge(u32),

    #[error("repeated vertex {0} in path sequence")]
    RepeatedVertex(u32),

    #[error("pair {{{0}, {1}}} is not a branch pair of the web")]
    PairNotInWeb(u32, u32),

    #[error("{0} is not a subset of the web's branch set")]
    NotBranchSubset(String),

    #[error("web fails validation: {0}")]
    InvalidWeb(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("brute-force guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("hypothesis violated: {0}")]
    ContractViolation(String),

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
