use thiserror::Error;

use crate::space::Space;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("points from different spaces: {left:?} and {right:?}")]
    MixedSpace { left: Space, right: Space },

    #[error("stage mismatch: expected {expected}, found {found}")]
    StageMismatch { expected: usize, found: usize },

    #[error("digit position {0} exceeds the supported depth")]
    DepthOverflow(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("element is not in the span of level-{level} generators: {reason}")]
    BasisMismatch { level: u32, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search horizon of {horizon} terms exhausted: {detail}")]
    HorizonExhausted { horizon: usize, detail: String },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
