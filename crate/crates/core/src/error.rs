use thiserror::Error;

use crate::geometry::Rect;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("placement {placed} leaves container {container}")]
    OutsideContainer { placed: Rect, container: Rect },
    #[error("placement {0} has no area")]
    EmptyPlacement(Rect),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unexpected end of input: expected {expected} items, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("line {line}: non-positive dimension")]
    NonPositive { line: usize },
    #[error("could not detect instance format")]
    UnknownFormat,
    #[error("instance has no boxes")]
    Empty,
}

/// A solution that breaks one of the packing rules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("placement {index} references unknown box type {box_id}")]
    UnknownBox { index: usize, box_id: u32 },
    #[error("box type {box_id}: placed {placed}, instance has {expected}")]
    CountMismatch { box_id: u32, placed: u64, expected: u64 },
    #[error("placement {index} has dimensions {w}x{h} not allowed for box type {box_id}")]
    BadOrientation { index: usize, box_id: u32, w: u32, h: u32 },
    #[error("placement {index} {rect} leaves the strip (width {width}, length {length})")]
    OutOfBounds { index: usize, rect: Rect, width: u32, length: u32 },
    #[error("placements {a} and {b} overlap")]
    Overlap { a: usize, b: usize },
    #[error("declared length {declared} differs from packed length {actual}")]
    LengthMismatch { declared: u32, actual: u32 },
    #[error("solution width {found} differs from instance width {expected}")]
    WidthMismatch { expected: u32, found: u32 },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("instance has no boxes")]
    EmptyInstance,
    #[error("box type {box_id} ({w}x{h}) does not fit strip width {width}")]
    Infeasible { box_id: u32, w: u32, h: u32, width: u32 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl From<GeometryError> for SolveError {
    fn from(e: GeometryError) -> Self {
        SolveError::Internal(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("block {bw}x{bl} does not fit space {space}")]
    BlockDoesNotFit { bw: u32, bl: u32, space: Rect },
}
