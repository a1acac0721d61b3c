//! Error type shared across the crate.

/// Errors produced by dataset handling, the assignment solver, the network
/// numerics, and training.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A trajectory violated its invariants (too short, non-increasing
    /// timestamps, inconsistent row widths).
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    /// A record could not be parsed. `line` counts demonstration records
    /// (1-based); 0 marks the file header.
    #[error("parse error at record {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Two collections that must have equal length do not.
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    /// A vector or layer width does not match what the consumer expects.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// A cost matrix entry was non-finite or negative.
    #[error("invalid cost: {0}")]
    InvalidCost(String),

    /// A predicted standard deviation was not strictly positive.
    #[error("invalid std: {0}")]
    InvalidStd(String),

    /// An encoder was called with no observation points.
    #[error("empty observation set")]
    EmptyObservation,

    /// A convex blend weight outside [0, 1].
    #[error("invalid blend weight: {0}")]
    InvalidWeight(f64),

    /// A demonstration had the wrong role for the operation.
    #[error("role error: {0}")]
    RoleError(String),

    #[error("empty dataset")]
    EmptyDataset,

    /// A configuration field failed validation.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
