use crate::arith::Ratio;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension overflow: {value} exceeds the limit {limit}")]
    DimensionOverflow { value: u128, limit: u64 },

    #[error("dimension overflow at step {step}: state dimension {dim} exceeds the limit {limit}")]
    TrajectoryOverflow { step: usize, dim: u128, limit: u64 },

    #[error("dimensions must be positive")]
    ZeroDimension,

    #[error("expected {expected} entries, got {actual}")]
    DataLength { expected: usize, actual: usize },

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("shape classes differ: {left} vs {right}")]
    ShapeClassMismatch { left: Ratio, right: Ratio },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("{rows}x{cols} matrix is not dimension-bounded (rows must divide cols)")]
    NotDimensionBounded { rows: usize, cols: usize },

    #[error("V_{r} is not an invariant space of the {rows}x{cols} matrix")]
    NotInvariant { r: usize, rows: usize, cols: usize },

    #[error("layer {k} is outside the transient range 0 < k < {i_star}")]
    LayerOutOfRange { k: usize, i_star: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by incompatible shapes or shape classes.
    pub fn is_shape_error(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch(_)
                | Error::ShapeClassMismatch { .. }
                | Error::NotDimensionBounded { .. }
                | Error::NotInvariant { .. }
                | Error::LayerOutOfRange { .. }
                | Error::DimensionOverflow { .. }
                | Error::TrajectoryOverflow { .. }
        )
    }
}
