//! The invertible mode-3 transform that defines the product.
//!
//! A [`TransformSpec`] wraps a nonsingular `n3 x n3` mixing matrix `M`
//! together with its precomputed inverse and a condition estimate. Applying
//! the transform to a tensor multiplies its mode-3 unfolding by `M` from the
//! left, i.e. it mixes frontal slices by the rows of `M`; all slice-wise
//! algorithms in this crate do their work in that transformed domain and map
//! back once at the end.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::tensor::{mode3_fold, mode3_unfold, C64, CMatrix, DenseTensor3};

/// Relative pivot threshold below which a mixing matrix is declared singular.
const SINGULAR_PIVOT_REL: f64 = 1e-14;

/// Condition estimate above which [`TransformSpec::is_ill_conditioned`]
/// reports true. Construction still succeeds; callers decide how to warn.
pub const ILL_CONDITION_LIMIT: f64 = 1e8;

/// A nonsingular mode-3 mixing matrix with its inverse and conditioning.
#[derive(Debug, Clone)]
pub struct TransformSpec {
    n3: usize,
    m: CMatrix,
    m_inv: CMatrix,
    condition_estimate: f64,
}

impl TransformSpec {
    /// Builds a transform from a square mixing matrix, computing the inverse
    /// once via a pivoted LU factorization.
    ///
    /// Fails with [`Error::SingularTransform`] when any pivot falls below
    /// `1e-14 * ||M||`. Very ill-conditioned but numerically nonsingular
    /// matrices are accepted; query [`Self::is_ill_conditioned`] to warn.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::shape(
                "TransformSpec::new",
                format!("mixing matrix must be square, got {}x{}", m.nrows(), m.ncols()),
            ));
        }
        let n3 = m.nrows();
        let norm = m.norm();
        let threshold = SINGULAR_PIVOT_REL * norm;
        let lu = m.clone().lu();
        let min_pivot = (0..n3)
            .map(|i| lu.u()[(i, i)].norm())
            .fold(f64::INFINITY, f64::min);
        if !(min_pivot > threshold) {
            return Err(Error::SingularTransform {
                pivot: min_pivot,
                threshold,
            });
        }
        let m_inv = lu
            .try_inverse()
            .ok_or(Error::SingularTransform {
                pivot: min_pivot,
                threshold,
            })?;
        let svd = m.clone().svd(false, false);
        let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let sigma_min = svd
            .singular_values
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let condition_estimate = if sigma_min > 0.0 {
            sigma_max / sigma_min
        } else {
            f64::INFINITY
        };
        Ok(TransformSpec {
            n3,
            m,
            m_inv,
            condition_estimate,
        })
    }

    /// The identity transform: the product reduces to the face-wise product.
    pub fn identity(n3: usize) -> Self {
        Self::new(CMatrix::identity(n3, n3)).expect("identity matrix is nonsingular")
    }

    /// The unnormalized discrete Fourier matrix `M[j,k] = w^(j*k)` with
    /// `w = exp(-2*pi*i/n3)`.
    ///
    /// Under this transform the product coincides exactly with the
    /// block-circulant T-product. See also [`Self::dft_unitary`].
    pub fn dft(n3: usize) -> Self {
        let m = CMatrix::from_fn(n3, n3, |j, k| {
            let angle = -2.0 * PI * (j * k) as f64 / n3 as f64;
            C64::new(angle.cos(), angle.sin())
        });
        Self::new(m).expect("DFT matrix is nonsingular")
    }

    /// The unitary (normalized) Fourier matrix: [`Self::dft`] divided by
    /// `sqrt(n3)`.
    ///
    /// Because the face-wise stage is quadratic in `M` while the inverse
    /// transform is linear in `M^-1`, scaling `M` by `a` scales the product by
    /// `a`: under this transform the product equals the block-circulant
    /// T-product divided by `sqrt(n3)`, not the T-product itself.
    pub fn dft_unitary(n3: usize) -> Self {
        let s = 1.0 / (n3 as f64).sqrt();
        let m = CMatrix::from_fn(n3, n3, |j, k| {
            let angle = -2.0 * PI * (j * k) as f64 / n3 as f64;
            C64::new(s * angle.cos(), s * angle.sin())
        });
        Self::new(m).expect("scaled DFT matrix is nonsingular")
    }

    /// The small integer mixing matrix `[[1,0,1],[0,1,0],[0,1,1]]` used by the
    /// worked examples and fixtures in this crate. Its inverse is also
    /// integral, so transforms of integer tensors are exact in floating point.
    pub fn reference() -> Self {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            let v = [[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 1.0, 1.0]][i][j];
            C64::new(v, 0.0)
        });
        Self::new(m).expect("reference matrix is nonsingular")
    }

    /// Number of frontal slices this transform applies to.
    pub fn n3(&self) -> usize {
        self.n3
    }

    /// The mixing matrix `M`.
    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    /// The precomputed inverse `M^-1`.
    pub fn m_inv(&self) -> &CMatrix {
        &self.m_inv
    }

    /// Ratio of the largest to the smallest singular value of `M`.
    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Frobenius-norm product `||M|| * ||M^-1||`: how much a forward plus
    /// inverse transform pass can amplify rounding noise. At least
    /// `sqrt(n3)`, exactly `n3` for the Fourier matrices, and growing with
    /// the conditioning of `M`. Rank decisions on transformed slices widen
    /// their cutoffs by this factor so that round-trip residue — e.g. a
    /// frontal slice that is exactly zero in the transformed domain but
    /// carries `eps`-level mixing debris after a round trip — still ranks
    /// as zero instead of as a genuine direction with a huge reciprocal.
    pub fn noise_gain(&self) -> f64 {
        self.m.norm() * self.m_inv.norm()
    }

    /// Whether the condition estimate exceeds [`ILL_CONDITION_LIMIT`].
    pub fn is_ill_conditioned(&self) -> bool {
        self.condition_estimate > ILL_CONDITION_LIMIT
    }

    fn check_n3(&self, a: &DenseTensor3, op: &'static str) -> Result<()> {
        if a.n3() != self.n3 {
            return Err(Error::shape(
                op,
                format!(
                    "tensor has {} frontal slices but the transform mixes {}",
                    a.n3(),
                    self.n3
                ),
            ));
        }
        Ok(())
    }
}

/// Applies the transform: folds `M * unfold(A)` back into a tensor.
///
/// Row `k` of `M` prescribes the mixture of original frontal slices that
/// becomes transformed slice `k`.
pub fn transform(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    t.check_n3(a, "transform")?;
    mode3_fold(&(t.m() * mode3_unfold(a)), a.n1(), a.n2())
}

/// Applies the inverse transform: folds `M^-1 * unfold(A)` back into a tensor.
pub fn inverse_transform(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    t.check_n3(a, "inverse_transform")?;
    mode3_fold(&(t.m_inv() * mode3_unfold(a)), a.n1(), a.n2())
}

/// Transformed frontal slices of `a`, the working form of every slice-wise
/// algorithm in this crate.
pub(crate) fn hat_slices(a: &DenseTensor3, t: &TransformSpec) -> Result<Vec<CMatrix>> {
    Ok(transform(a, t)?.slices())
}

/// Rebuilds a tensor from transformed frontal slices (fold, then inverse
/// transform).
pub(crate) fn from_hat_slices(slices: &[CMatrix], t: &TransformSpec) -> Result<DenseTensor3> {
    inverse_transform(&DenseTensor3::from_slices(slices)?, t)
}
