use thiserror::Error;

/// Errors raised by grid operations and constructions.
///
/// Verification failures are never errors; they come back as
/// [`Certificate`](crate::verify::Certificate)s.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cell ({row},{col}) is outside a {rows}x{cols} grid")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("cell ({row},{col}): zero entries must be stored as explicit zeros")]
    ZeroEntry { row: usize, col: usize },
    #[error("cannot shift a grid that is not shiftable")]
    NotShiftable,
    #[error("blocks have mismatched heights ({expected} vs {found})")]
    HeightMismatch { expected: usize, found: usize },
    #[error("blocks have mismatched widths ({expected} vs {found})")]
    WidthMismatch { expected: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cell ({row},{col}) written twice (offsets {first} and {second})")]
    Collision {
        row: usize,
        col: usize,
        first: i64,
        second: i64,
    },
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("search budget exhausted: {0}")]
    Exhausted(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
