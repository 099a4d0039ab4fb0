use thiserror::Error;

/// Errors raised by geometric construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("vertex recovery is only supported in 2D (got dimension {0})")]
    DimensionUnsupported(usize),
    #[error("point set is degenerate (hull has empty interior)")]
    Degenerate,
    #[error("plane section of the polytope is empty")]
    EmptySection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("half-space normal is zero")]
    ZeroNormal,
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("inconsistent representations: {0}")]
    Inconsistent(String),
    #[error("ray origin lies outside the polytope")]
    OriginOutside,
    #[error("zero direction")]
    ZeroDirection,
    #[error("direction is not unit length (norm {0})")]
    NonUnitDirection(f64),
    #[error("ray has no exit (unbounded representation)")]
    NoExit,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid plane: {0}")]
    InvalidPlane(String),
    #[error("instance generation failed after {0} attempts")]
    GenerationFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
