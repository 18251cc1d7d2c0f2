use thiserror::Error;

/// Errors raised by the chain computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChainError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} index {index} out of range {min}..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: i64,
        min: i64,
        max: i64,
    },

    #[error("matrix is not symmetric (max |A - A^T| = {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("size {size} exceeds the limit {limit} for {what}")]
    CostGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("the analytic inverse exists only for the unpinned chain (pin_ratio = {0})")]
    PinnedInverse(f64),

    #[error("empty grid")]
    EmptyGrid,

    #[error("grid must be strictly increasing (at position {0})")]
    UnsortedGrid(usize),

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("length mismatch: {xs} grid points but {ys} values")]
    LengthMismatch { xs: usize, ys: usize },

    #[error("fit needs at least {needed} points in range, found {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("value at x = {x} is not positive ({value}); cannot take the logarithm")]
    NonPositive { x: f64, value: f64 },
}

impl ChainError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        ChainError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = ChainError> = std::result::Result<T, E>;
