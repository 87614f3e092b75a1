//! Generalized inverses under the product: slice-wise SVD canonical form,
//! Moore-Penrose, the parameterized inner-inverse family, the 1-MP / 1-D /
//! 1-Star combinations, index and Drazin inverse, and the exact inverse.
//!
//! Every algorithm follows the same shape: transform once, factor or compose
//! per slice, inverse-transform once. The inner-inverse family is the
//! backbone: relative to the SVD `A_hat = U * diag(sigma) * V^H` of each
//! transformed slice, every inner inverse is
//!
//! ```text
//! G_hat = V * | diag(1/sigma)  W12 | * U^H
//!             | W21            W22 |
//! ```
//!
//! for free blocks `W12`, `W21`, `W22`; all zeros gives the Moore-Penrose
//! inverse. The mixed families fix `A^- = G` and compose:
//! `A^{-,dagger} = G * A * A^dagger`, `A^{-,D} = G * A * A^D`, and
//! `A^{-,*} = G * A * A^H`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matfun::{
    default_rank_tol, matrix_drazin, matrix_index, pinv_from_factors, rank_from_sigma, svd_full,
    FullSvd, RANK_NOISE_SAFETY,
};
use crate::product::{conj_transpose, m_product};
use crate::random::complex_gaussian;
use crate::tensor::{C64, CMatrix, DenseTensor3};
use crate::transform::{from_hat_slices, hat_slices, TransformSpec};

/// Relative residual above which [`OneInverseParams::from_one_inverse`]
/// rejects its candidate: `||A*G*A - A|| > 1e-8 * max(||A||, 1)`.
pub const ONE_INVERSE_ACCEPT_TOL: f64 = 1e-8;

/// SVD factors of one transformed slice with its numerical rank.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    /// Left factor, full `n1 x n1` unitary.
    pub u: CMatrix,
    /// Singular values, length `min(n1, n2)`, nonincreasing.
    pub singulars: Vec<f64>,
    /// Right factor, full `n2 x n2` unitary.
    pub v: CMatrix,
    /// Count of singular values above the rank tolerance.
    pub rank: usize,
}

/// Per-slice SVDs of a tensor's transformed frontal slices.
#[derive(Debug, Clone)]
pub struct SliceSvd {
    /// One factorization per frontal slice, in slice order.
    pub slices: Vec<SvdFactors>,
}

impl SliceSvd {
    fn n1(&self) -> usize {
        self.slices[0].u.nrows()
    }

    fn n2(&self) -> usize {
        self.slices[0].v.nrows()
    }
}

/// Free blocks selecting one member of the inner-inverse family on one slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBlocks {
    /// `rank x (n1 - rank)`.
    pub w12: CMatrix,
    /// `(n2 - rank) x rank`.
    pub w21: CMatrix,
    /// `(n2 - rank) x (n1 - rank)`.
    pub w22: CMatrix,
}

/// Where a parameter set came from; seeded parameters are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Zero,
    Seeded(u64),
    UserSupplied,
}

/// Free parameters selecting one member of the inner-inverse family.
///
/// Block shapes are tied to the slice ranks of the factorization they were
/// created against; the inverse constructors re-check conformance.
#[derive(Debug, Clone, PartialEq)]
pub struct OneInverseParams {
    /// One block triple per frontal slice.
    pub slices: Vec<ParamBlocks>,
    /// How the blocks were produced.
    pub provenance: Provenance,
}

impl OneInverseParams {
    /// All-zero blocks: selects the Moore-Penrose inverse itself.
    pub fn zeros(svd: &SliceSvd) -> Self {
        let (n1, n2) = (svd.n1(), svd.n2());
        let slices = svd
            .slices
            .iter()
            .map(|f| ParamBlocks {
                w12: CMatrix::zeros(f.rank, n1 - f.rank),
                w21: CMatrix::zeros(n2 - f.rank, f.rank),
                w22: CMatrix::zeros(n2 - f.rank, n1 - f.rank),
            })
            .collect();
        OneInverseParams {
            slices,
            provenance: Provenance::Zero,
        }
    }

    /// Standard-complex-Gaussian blocks, drawn per slice from independent
    /// streams keyed by `(seed, slice)`; identical seeds reproduce identical
    /// blocks.
    pub fn seeded(svd: &SliceSvd, seed: u64) -> Self {
        let (n1, n2) = (svd.n1(), svd.n2());
        let slices = svd
            .slices
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let mut draw = |rows: usize, cols: usize| {
                    let data: Vec<C64> =
                        (0..rows * cols).map(|_| complex_gaussian(&mut rng)).collect();
                    CMatrix::from_vec(rows, cols, data)
                };
                ParamBlocks {
                    w12: draw(f.rank, n1 - f.rank),
                    w21: draw(n2 - f.rank, f.rank),
                    w22: draw(n2 - f.rank, n1 - f.rank),
                }
            })
            .collect();
        OneInverseParams {
            slices,
            provenance: Provenance::Seeded(seed),
        }
    }

    /// Wraps explicit per-slice blocks.
    pub fn from_blocks(slices: Vec<ParamBlocks>) -> Self {
        OneInverseParams {
            slices,
            provenance: Provenance::UserSupplied,
        }
    }

    /// Recovers the parameters of an explicitly given inner inverse `g`.
    ///
    /// Validates `||A*G*A - A|| <= 1e-8 * max(||A||, 1)` first, then reads the
    /// blocks off `V^H * G_hat * U` per slice (whose top-left corner is
    /// `diag(1/sigma)` exactly when `g` is an inner inverse).
    pub fn from_one_inverse(
        a: &DenseTensor3,
        g: &DenseTensor3,
        t: &TransformSpec,
    ) -> Result<Self> {
        if g.n1() != a.n2() || g.n2() != a.n1() || g.n3() != a.n3() {
            return Err(Error::shape(
                "OneInverseParams::from_one_inverse",
                format!(
                    "inner inverse of a {}x{}x{} tensor must be {}x{}x{}, got {}x{}x{}",
                    a.n1(),
                    a.n2(),
                    a.n3(),
                    a.n2(),
                    a.n1(),
                    a.n3(),
                    g.n1(),
                    g.n2(),
                    g.n3()
                ),
            ));
        }
        let aga = m_product(&m_product(a, g, t)?, a, t)?;
        let scale = a.frobenius_norm().max(1.0);
        let residual = crate::tensor::tensor_sub(&aga, a)?.frobenius_norm() / scale;
        if !(residual <= ONE_INVERSE_ACCEPT_TOL) {
            return Err(Error::NotOneInverse {
                residual,
                tol: ONE_INVERSE_ACCEPT_TOL,
            });
        }
        let svd = slice_svd(a, t, None)?;
        let g_hats = hat_slices(g, t)?;
        let (n1, n2) = (svd.n1(), svd.n2());
        let slices = svd
            .slices
            .iter()
            .zip(g_hats.iter())
            .map(|(f, gh)| {
                let mid = f.v.adjoint() * gh * &f.u;
                let r = f.rank;
                ParamBlocks {
                    w12: mid.view((0, r), (r, n1 - r)).into_owned(),
                    w21: mid.view((r, 0), (n2 - r, r)).into_owned(),
                    w22: mid.view((r, r), (n2 - r, n1 - r)).into_owned(),
                }
            })
            .collect();
        Ok(OneInverseParams {
            slices,
            provenance: Provenance::UserSupplied,
        })
    }

    fn check_conformance(&self, svd: &SliceSvd, op: &'static str) -> Result<()> {
        if self.slices.len() != svd.slices.len() {
            return Err(Error::ParamsMismatch {
                slice: self.slices.len().min(svd.slices.len()),
                detail: format!(
                    "{op}: parameters cover {} slices but the tensor has {}",
                    self.slices.len(),
                    svd.slices.len()
                ),
            });
        }
        let (n1, n2) = (svd.n1(), svd.n2());
        for (k, (f, b)) in svd.slices.iter().zip(self.slices.iter()).enumerate() {
            let r = f.rank;
            let want = [
                (r, n1 - r, b.w12.nrows(), b.w12.ncols(), "w12"),
                (n2 - r, r, b.w21.nrows(), b.w21.ncols(), "w21"),
                (n2 - r, n1 - r, b.w22.nrows(), b.w22.ncols(), "w22"),
            ];
            for (wr, wc, gr, gc, name) in want {
                if (wr, wc) != (gr, gc) {
                    return Err(Error::ParamsMismatch {
                        slice: k,
                        detail: format!(
                            "{op}: {name} must be {wr}x{wc} for rank {r}, got {gr}x{gc}"
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Per-slice indices of a square tensor and their maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexResult {
    /// Smallest `k` with `rank(S^k) = rank(S^(k+1))` for each transformed
    /// slice `S`; invertible slices report 0.
    pub per_slice: Vec<usize>,
    /// The tensor's index: the maximum over slices.
    pub overall: usize,
}

/// SVD of every transformed frontal slice, with numerical ranks.
///
/// `tol` is an absolute override for the rank cutoff; the default is
/// `max(n1, n2) * eps * sigma_max`, widened by the transform's noise gain,
/// with `sigma_max` taken across *all* slices. Anchoring every slice to the
/// shared tensor scale — rather than to its own largest singular value —
/// makes a slice that is mere rounding residue of the others rank as zero
/// instead of as full-rank noise, and matches what a single factorization of
/// the block-diagonal matrix form would decide. The widening keeps singular
/// values a transform round trip can manufacture from nothing (mixing debris
/// a few `eps` above the bare cutoff) from being counted — and later
/// inverted — as genuine.
pub fn slice_svd(a: &DenseTensor3, t: &TransformSpec, tol: Option<f64>) -> Result<SliceSvd> {
    let hats = hat_slices(a, t)?;
    let factors = hats
        .iter()
        .enumerate()
        .map(|(k, h)| svd_full(h, k))
        .collect::<Result<Vec<_>>>()?;
    let scale = factors
        .iter()
        .map(|f| f.sigma.first().copied().unwrap_or(0.0))
        .fold(0.0f64, f64::max);
    let cut =
        tol.unwrap_or_else(|| transform_rank_gain(t) * default_rank_tol(a.n1(), a.n2(), scale));
    let slices = factors
        .into_iter()
        .map(|FullSvd { u, sigma, v }| {
            let rank = rank_from_sigma(&sigma, cut);
            SvdFactors {
                u,
                singulars: sigma,
                v,
                rank,
            }
        })
        .collect();
    Ok(SliceSvd { slices })
}

/// Widening factor for rank cutoffs on transformed slices: the transform's
/// own noise amplification times a fixed safety margin, so that round-trip
/// rounding residue never ranks as a genuine direction.
fn transform_rank_gain(t: &TransformSpec) -> f64 {
    RANK_NOISE_SAFETY * t.noise_gain()
}

/// The scale rank decisions are measured against: the largest singular value
/// over all transformed slices.
fn tensor_scale_anchor(hats: &[CMatrix]) -> Result<f64> {
    let mut scale: f64 = 0.0;
    for (k, h) in hats.iter().enumerate() {
        let FullSvd { sigma, .. } = svd_full(h, k)?;
        scale = scale.max(sigma.first().copied().unwrap_or(0.0));
    }
    Ok(scale)
}

/// The Moore-Penrose inverse: the unique `X` with `A*X*A = A`, `X*A*X = X`,
/// and both `A*X` and `X*A` Hermitian under the product.
pub fn mp_inverse(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    let svd = slice_svd(a, t, None)?;
    let slices: Vec<CMatrix> = svd
        .slices
        .iter()
        .map(|f| {
            pinv_from_factors(
                &FullSvd {
                    u: f.u.clone(),
                    sigma: f.singulars.clone(),
                    v: f.v.clone(),
                },
                f.rank,
            )
        })
        .collect();
    from_hat_slices(&slices, t)
}

/// The middle factor `[[diag(1/sigma), W12], [W21, W22]]` of one slice's
/// inner inverse; pass zero matrices to suppress blocks.
fn middle_matrix(f: &SvdFactors, w12: &CMatrix, w21: &CMatrix, w22: &CMatrix) -> CMatrix {
    let (n1, n2) = (f.u.nrows(), f.v.nrows());
    let r = f.rank;
    let mut mid = CMatrix::zeros(n2, n1);
    for i in 0..r {
        mid[(i, i)] = C64::new(1.0 / f.singulars[i], 0.0);
    }
    for i in 0..r {
        for j in 0..n1 - r {
            mid[(i, r + j)] = w12[(i, j)];
        }
    }
    for i in 0..n2 - r {
        for j in 0..r {
            mid[(r + i, j)] = w21[(i, j)];
        }
    }
    for i in 0..n2 - r {
        for j in 0..n1 - r {
            mid[(r + i, r + j)] = w22[(i, j)];
        }
    }
    mid
}

fn one_inverse_hats(svd: &SliceSvd, params: &OneInverseParams) -> Vec<CMatrix> {
    svd.slices
        .iter()
        .zip(params.slices.iter())
        .map(|(f, b)| &f.v * middle_matrix(f, &b.w12, &b.w21, &b.w22) * f.u.adjoint())
        .collect()
}

/// The member of the inner-inverse family `A{1}` selected by `params`:
/// satisfies `A*G*A = A`; with all-zero parameters it equals [`mp_inverse`].
pub fn one_inverse(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<DenseTensor3> {
    let svd = slice_svd(a, t, None)?;
    params.check_conformance(&svd, "one_inverse")?;
    from_hat_slices(&one_inverse_hats(&svd, params), t)
}

/// A seeded random member of `A{1}` together with the parameters that
/// reproduce it exactly.
pub fn one_inverse_random(
    a: &DenseTensor3,
    t: &TransformSpec,
    seed: u64,
) -> Result<(DenseTensor3, OneInverseParams)> {
    let svd = slice_svd(a, t, None)?;
    let params = OneInverseParams::seeded(&svd, seed);
    let g = from_hat_slices(&one_inverse_hats(&svd, &params), t)?;
    Ok((g, params))
}

/// The 1-MP inverse `A^{-,dagger} = G * A * A^dagger` for the inner inverse
/// `G` selected by `params`.
///
/// Computed in closed form per slice: only the `W21` block survives the
/// composition, so the result is `V * [[diag(1/sigma), 0], [W21, 0]] * U^H`.
/// Always a member of `A{1,2,3}`.
pub fn one_mp_inverse(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<DenseTensor3> {
    let svd = slice_svd(a, t, None)?;
    params.check_conformance(&svd, "one_mp_inverse")?;
    let (n1, n2) = (svd.n1(), svd.n2());
    let slices: Vec<CMatrix> = svd
        .slices
        .iter()
        .zip(params.slices.iter())
        .map(|(f, b)| {
            let w12 = CMatrix::zeros(f.rank, n1 - f.rank);
            let w22 = CMatrix::zeros(n2 - f.rank, n1 - f.rank);
            &f.v * middle_matrix(f, &w12, &b.w21, &w22) * f.u.adjoint()
        })
        .collect();
    from_hat_slices(&slices, t)
}

/// Per-slice indices and their maximum, the tensor's index.
///
/// The index of a slice is the smallest `k >= 0` at which the rank of its
/// `k`-th power stabilizes; invertible slices have index 0.
pub fn tensor_index(a: &DenseTensor3, t: &TransformSpec) -> Result<IndexResult> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "tensor_index",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    let hats = hat_slices(a, t)?;
    let anchor = tensor_scale_anchor(&hats)?;
    let per_slice = hats
        .iter()
        .enumerate()
        .map(|(k, h)| matrix_index(h, Some(anchor), transform_rank_gain(t), k))
        .collect::<Result<Vec<_>>>()?;
    let overall = per_slice.iter().copied().max().unwrap_or(0);
    Ok(IndexResult { per_slice, overall })
}

/// The Drazin inverse: the unique `X` with `X*A^(k+1) = A^k`, `X*A*X = X`,
/// and `A*X = X*A`, where `k = max(index, 1)`.
///
/// Each transformed slice is inverted via `S^k * (S^(2k+1))^+ * S^k` with the
/// single overall exponent, which dominates every per-slice index.
pub fn drazin_inverse(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "drazin_inverse",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    let hats = hat_slices(a, t)?;
    let anchor = tensor_scale_anchor(&hats)?;
    let k = tensor_index(a, t)?.overall.max(1);
    let slices = hats
        .iter()
        .enumerate()
        .map(|(i, h)| matrix_drazin(h, k, Some(anchor), transform_rank_gain(t), i))
        .collect::<Result<Vec<_>>>()?;
    from_hat_slices(&slices, t)
}

/// The 1-D inverse `A^{-,D} = G * A * A^D` for the inner inverse `G` selected
/// by `params`; requires a square tensor.
pub fn one_d_inverse(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<DenseTensor3> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "one_d_inverse",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    let hats = hat_slices(a, t)?;
    let svd = slice_svd(a, t, None)?;
    params.check_conformance(&svd, "one_d_inverse")?;
    let g_hats = one_inverse_hats(&svd, params);
    let anchor = tensor_scale_anchor(&hats)?;
    let k = {
        let per_slice = hats
            .iter()
            .enumerate()
            .map(|(i, h)| matrix_index(h, Some(anchor), transform_rank_gain(t), i))
            .collect::<Result<Vec<_>>>()?;
        per_slice.into_iter().max().unwrap_or(0).max(1)
    };
    let slices = hats
        .iter()
        .zip(g_hats.iter())
        .enumerate()
        .map(|(i, (ah, gh))| Ok(gh * ah * matrix_drazin(ah, k, Some(anchor), transform_rank_gain(t), i)?))
        .collect::<Result<Vec<_>>>()?;
    from_hat_slices(&slices, t)
}

/// The 1-Star inverse `A^{-,*} = G * A * A^H` for the inner inverse `G`
/// selected by `params`.
pub fn one_star_inverse(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<DenseTensor3> {
    let svd = slice_svd(a, t, None)?;
    params.check_conformance(&svd, "one_star_inverse")?;
    let hats = hat_slices(a, t)?;
    let g_hats = one_inverse_hats(&svd, params);
    let slices: Vec<CMatrix> = hats
        .iter()
        .zip(g_hats.iter())
        .map(|(ah, gh)| gh * ah * ah.adjoint())
        .collect();
    from_hat_slices(&slices, t)
}

/// The two-sided exact inverse; every transformed slice must be numerically
/// nonsingular.
///
/// Singularity is decided by each slice's smallest singular value against the
/// rank tolerance (an independent check from the LU factorization that then
/// performs the inversion).
pub fn exact_inverse(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "exact_inverse",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    let hats = hat_slices(a, t)?;
    let anchor = tensor_scale_anchor(&hats)?;
    let slices = hats
        .iter()
        .enumerate()
        .map(|(k, h)| {
            let FullSvd { sigma, .. } = svd_full(h, k)?;
            let tol = transform_rank_gain(t) * default_rank_tol(h.nrows(), h.ncols(), anchor);
            let sigma_min = sigma.last().copied().unwrap_or(0.0);
            if sigma_min <= tol {
                return Err(Error::SingularSlice {
                    slice: k,
                    sigma_min,
                    tol,
                });
            }
            h.clone().try_inverse().ok_or(Error::SingularSlice {
                slice: k,
                sigma_min,
                tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    from_hat_slices(&slices, t)
}

/// `A^H` under the product, as used by the 1-Star family.
pub fn star_of(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    conj_transpose(a, t)
}
