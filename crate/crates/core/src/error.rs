//! Error types shared by every tensor operation.

use thiserror::Error;

/// Errors produced by tensor algebra, factorizations, and inverse computations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A frontal-slice index was outside `0..n3`.
    #[error("slice index {k} out of range for tensor with {n3} frontal slices")]
    SliceIndexOutOfRange { k: usize, n3: usize },

    /// Two operands (or an operand and a transform) had incompatible shapes.
    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    /// An operation that needs n1 = n2 was given a rectangular tensor.
    #[error("{op} requires square frontal slices, got {n1}x{n2}")]
    NonSquare {
        op: &'static str,
        n1: usize,
        n2: usize,
    },

    /// The mixing matrix of a transform is numerically singular.
    #[error("transform matrix is singular: pivot {pivot:.3e} below threshold {threshold:.3e}")]
    SingularTransform { pivot: f64, threshold: f64 },

    /// A transformed frontal slice is numerically singular where an exact
    /// inverse was requested.
    #[error(
        "transformed slice {slice} is singular: smallest singular value {sigma_min:.3e} \
         is at or below the rank tolerance {tol:.3e}"
    )]
    SingularSlice {
        slice: usize,
        sigma_min: f64,
        tol: f64,
    },

    /// The SVD iteration failed to converge on one slice.
    #[error("singular value decomposition did not converge on slice {slice}")]
    SvdFailure { slice: usize },

    /// Free-parameter blocks do not conform to the slice ranks they are used with.
    #[error("parameter blocks for slice {slice} do not conform: {detail}")]
    ParamsMismatch { slice: usize, detail: String },

    /// A tensor supplied as a {1}-inverse fails the defining equation.
    #[error(
        "supplied tensor is not a {{1}}-inverse: residual {residual:.3e} exceeds \
         tolerance {tol:.3e}"
    )]
    NotOneInverse { residual: f64, tol: f64 },

    /// An equation subset or similar selector was empty or out of range.
    #[error("invalid selector in {op}: {detail}")]
    InvalidSelector { op: &'static str, detail: String },
}

/// Convenient result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }
}
