use thiserror::Error;

use crate::diagram::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZxwError {
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),

    #[error("ill-formed diagram: {}", .0.join("; "))]
    IllFormed(Vec<String>),

    #[error("missing node {0}")]
    MissingNode(NodeId),

    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),

    #[error("not a normal-form diagram: {0}")]
    NotNormalForm(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("normalization step {step} diverged from the diagram by {deviation:e}")]
    StepMismatch { step: usize, deviation: f64 },

    #[error("diagram is not layerable: {0}")]
    NotLayerable(String),

    #[error("rule {rule} cannot be instantiated: {reason}")]
    NotInstantiable { rule: String, reason: String },

    #[error("rewriting with {rule} changed the interpretation by {deviation:e}")]
    Unsound { rule: String, deviation: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, ZxwError>;
