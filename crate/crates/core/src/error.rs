use thiserror::Error;

use crate::lattice::IntVec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("product of radicands is not the square of a rational")]
    NonSquareProduct,

    #[error("taps landing on offset {offset} cannot be summed exactly")]
    IncommensurableTaps { offset: IntVec },

    #[error("dimension {dim} exceeds the configured cap {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("high-pass filter #{index} is not a signed two-tap difference")]
    NotTwoTap { index: usize },

    #[error("direction matrix has rational rank {rank}, needs {rows}")]
    InvalidRank { rank: usize, rows: usize },

    #[error("direction matrix fails the odd-vector condition: P^T w is even for w = {witness}")]
    FailsOddCondition { witness: IntVec },

    #[error("direction matrix has {cols} columns, enumeration cap is {max}")]
    TooManyColumns { cols: usize, max: usize },

    #[error("refinement mask taps do not sum to 1")]
    MaskNotNormalized,

    #[error("bad tensor dimensions: {0}")]
    BadDims(String),

    #[error("coefficient pyramid does not match the bank: {0}")]
    ShapeMismatch(String),

    #[error("sample grid resolution {found} does not match the expected {expected}")]
    GridMismatch { expected: u32, found: u32 },

    #[error("iteration count {iters} exceeds the cap {max}")]
    TooManyIterations { iters: u32, max: u32 },

    #[error("duplicate tap offset {0}")]
    DuplicateOffset(IntVec),

    #[error("invalid coefficient: {0}")]
    InvalidCoefficient(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
