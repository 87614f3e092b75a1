//! Internal dense-matrix helpers shared by the inverse algorithms.
//!
//! Everything here operates on a single complex matrix — one transformed
//! frontal slice at a time. The SVD wrapper returns *full* unitary factors
//! with singular values sorted nonincreasing, which the parameterized inverse
//! families require. The backend's QR-iteration SVD occasionally returns
//! factors that fail to reconstruct rank-deficient complex inputs (unitary
//! to machine precision, product off by 1e-4), so its right factor is only
//! used to warm-start a one-sided Jacobi pass that re-measures every column
//! pair of `a * v` directly; the polished factors are accurate regardless of
//! the starting point.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::tensor::{C64, CMatrix};

/// Full SVD of one slice: `a = u * diag(sigma) * v^H` with `u` `n1 x n1`
/// unitary, `v` `n2 x n2` unitary, and `sigma` of length `min(n1, n2)`
/// sorted nonincreasing.
pub(crate) struct FullSvd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

/// Relative off-diagonal threshold below which a column pair counts as
/// orthogonal: `|w_p^H w_q| <= JACOBI_REL_TOL * |w_p| * |w_q|`. Residual
/// non-orthogonality shows up amplified by the condition number in products
/// like `x * a`, so the threshold sits close to the rounding floor.
const JACOBI_REL_TOL: f64 = 4.0 * f64::EPSILON;
/// A sweep that stalls above [`JACOBI_REL_TOL`] but below this is still a
/// usable factorization; only genuine non-convergence is an error.
const JACOBI_ACCEPT_REL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) fn svd_full(a: &CMatrix, slice: usize) -> Result<FullSvd> {
    let (n1, n2) = (a.nrows(), a.ncols());

    // Warm start: the backend's right factor is usually within a rotation or
    // two of the answer, but nothing below depends on it being right.
    let mut v = match a.clone().try_svd(true, true, f64::EPSILON, 0) {
        Some(svd) => match svd.v_t {
            Some(v_t) => complete_unitary(&v_t.adjoint()),
            None => CMatrix::identity(n2, n2),
        },
        None => CMatrix::identity(n2, n2),
    };
    let mut w = a * &v;

    // One-sided Jacobi: unitary right rotations orthogonalize the columns of
    // `w` while `v` accumulates the same rotations, so `w = a * v` holds
    // throughout. At convergence the column norms are the singular values.
    //
    // Columns whose mass has fallen to the rounding floor are frozen: null
    // columns of a rank-deficient input carry nothing but the noise the last
    // rotation deposited, and re-rotating them against full columns keeps
    // regenerating that noise forever instead of converging.
    let frob_sq: f64 = (0..n2).map(|j| w.column(j).norm_squared()).sum();
    let floor = n1.max(n2) as f64 * f64::EPSILON;
    let floor_sq = floor * floor * frob_sq;
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n2 {
            for q in (p + 1)..n2 {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                if alpha <= floor_sq || beta <= floor_sq {
                    continue;
                }
                let gamma = w.column(p).dotc(&w.column(q));
                if gamma.norm_sqr() <= JACOBI_REL_TOL * JACOBI_REL_TOL * alpha * beta {
                    continue;
                }
                rotated = true;
                // Factor the phase out of gamma, then the classical real
                // rotation zeroing the off-diagonal of [[alpha, g], [g, beta]].
                let g = gamma.norm();
                let phase_conj = gamma.conj() / C64::new(g, 0.0);
                let tau = (alpha - beta) / (2.0 * g);
                let t = -tau.signum() / (tau.abs() + (tau * tau + 1.0).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n1 {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)] * phase_conj;
                    w[(i, p)] = wp * c - wq * s;
                    w[(i, q)] = wp * s + wq * c;
                }
                for i in 0..n2 {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)] * phase_conj;
                    v[(i, p)] = vp * c - vq * s;
                    v[(i, q)] = vp * s + vq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        // Rounding can hold a pair just above the strict threshold forever;
        // accept the stall when every active pair is orthogonal for practical
        // purposes, fail only when the sweeps went nowhere.
        let mut worst: f64 = 0.0;
        for p in 0..n2 {
            for q in (p + 1)..n2 {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                if alpha <= floor_sq || beta <= floor_sq {
                    continue;
                }
                let gamma = w.column(p).dotc(&w.column(q));
                worst = worst.max(gamma.norm() / (alpha * beta).sqrt());
            }
        }
        if worst > JACOBI_ACCEPT_REL {
            return Err(Error::SvdFailure { slice });
        }
    }

    let mut order: Vec<usize> = (0..n2).collect();
    let norms: Vec<f64> = (0..n2).map(|j| w.column(j).norm()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let p = n1.min(n2);
    let sigma: Vec<f64> = order[..p].iter().map(|&j| norms[j]).collect();
    let v = CMatrix::from_fn(n2, n2, |r, c| v[(r, order[c])]);

    // Left factor: normalized columns of w above the noise floor, completed
    // to a full unitary. Frozen junk columns were never orthogonalized, so
    // admitting them would wreck u's unitarity; their singular values sit
    // below every rank tolerance, so the replacement directions are inert.
    let kept: Vec<usize> = order[..p]
        .iter()
        .copied()
        .filter(|&j| norms[j] * norms[j] > floor_sq)
        .collect();
    let u_cols = CMatrix::from_fn(n1, kept.len(), |r, c| {
        w[(r, kept[c])] / C64::new(norms[kept[c]], 0.0)
    });

    Ok(FullSvd {
        u: complete_unitary(&u_cols),
        sigma,
        v,
    })
}

/// Extends an `n x r` matrix with orthonormal columns to an `n x n` unitary.
///
/// Greedy modified Gram-Schmidt: at each step the canonical basis vector with
/// the largest residual against the current columns is orthogonalized (twice,
/// for stability) and appended. The largest residual is always bounded away
/// from zero because the basis spans the whole space.
pub(crate) fn complete_unitary(q: &CMatrix) -> CMatrix {
    let n = q.nrows();
    let mut cols: Vec<DVector<C64>> = (0..q.ncols()).map(|j| q.column(j).into_owned()).collect();
    while cols.len() < n {
        let mut best: Option<(f64, DVector<C64>)> = None;
        for i in 0..n {
            let mut v = DVector::<C64>::zeros(n);
            v[i] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in &cols {
                    let coef = c.dotc(&v);
                    v.axpy(-coef, c, C64::new(1.0, 0.0));
                }
            }
            let norm = v.norm();
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("n >= 1");
        cols.push(v / C64::new(norm, 0.0));
    }
    CMatrix::from_columns(&cols)
}

/// Default numerical-rank tolerance for a slice: `max(n1, n2) * eps * sigma_max`.
pub(crate) fn default_rank_tol(n1: usize, n2: usize, sigma_max: f64) -> f64 {
    n1.max(n2) as f64 * f64::EPSILON * sigma_max
}

/// Safety margin multiplied into a caller-supplied noise gain when widening
/// rank cutoffs: covers the small constants the gain itself does not track
/// (dot-product lengths, the degree of the power being ranked).
pub(crate) const RANK_NOISE_SAFETY: f64 = 4.0;

/// Numerical rank: number of singular values strictly above the tolerance.
pub(crate) fn rank_from_sigma(sigma: &[f64], tol: f64) -> usize {
    sigma.iter().take_while(|&&s| s > tol).count()
}

/// Moore-Penrose inverse of one slice, using the default rank tolerance
/// unless an absolute override is supplied.
pub(crate) fn pinv(a: &CMatrix, tol: Option<f64>, slice: usize) -> Result<CMatrix> {
    let svd = svd_full(a, slice)?;
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or_else(|| default_rank_tol(a.nrows(), a.ncols(), sigma_max));
    let rank = rank_from_sigma(&svd.sigma, tol);
    Ok(pinv_from_factors(&svd, rank))
}

/// `v_r * diag(1/sigma_r) * u_r^H` for the leading `rank` triplets.
pub(crate) fn pinv_from_factors(svd: &FullSvd, rank: usize) -> CMatrix {
    let (n1, n2) = (svd.u.nrows(), svd.v.nrows());
    let mut out = CMatrix::zeros(n2, n1);
    for r in 0..rank {
        let scale = C64::new(1.0 / svd.sigma[r], 0.0);
        let vcol = svd.v.column(r);
        let ucol = svd.u.column(r);
        for i in 0..n2 {
            for j in 0..n1 {
                out[(i, j)] += vcol[i] * scale * ucol[j].conj();
            }
        }
    }
    out
}

/// Numerical rank of a matrix under the default (or overridden) tolerance.
pub(crate) fn matrix_rank(a: &CMatrix, tol: Option<f64>, slice: usize) -> Result<usize> {
    let svd = svd_full(a, slice)?;
    let sigma_max = svd.sigma.first().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or_else(|| default_rank_tol(a.nrows(), a.ncols(), sigma_max));
    Ok(rank_from_sigma(&svd.sigma, tol))
}

/// `a^k` by repeated multiplication; `k = 0` gives the identity.
pub(crate) fn matrix_power(a: &CMatrix, k: usize) -> CMatrix {
    let n = a.nrows();
    let mut acc = CMatrix::identity(n, n);
    for _ in 0..k {
        acc = &acc * a;
    }
    acc
}

/// Smallest `k >= 0` with `rank(a^k) = rank(a^(k+1))`; `rank(a^0) = n`.
///
/// The rank sequence strictly decreases until it stabilizes, so the answer is
/// at most `n`. The rank cutoff for the `j`-th power is anchored to
/// `anchor^j` rather than to the power's own largest singular value: a power
/// that has collapsed to rounding noise must rank as zero, not as full-rank
/// noise. `anchor` is the scale the matrix is measured against — the largest
/// singular value across the slices of the owning tensor, so that a slice
/// which is itself rounding residue of the others ranks as zero; `None`
/// self-anchors to the matrix's own largest singular value (the right choice
/// for a standalone matrix). `gain` widens every cutoff by the noise
/// amplification the caller knows the matrix has been through (a transform
/// round trip); standalone callers pass 1.0.
pub(crate) fn matrix_index(
    a: &CMatrix,
    anchor: Option<f64>,
    gain: f64,
    slice: usize,
) -> Result<usize> {
    let n = a.nrows();
    let scale = match anchor {
        Some(s) => s,
        None => svd_full(a, slice)?.sigma.first().copied().unwrap_or(0.0),
    };
    let mut prev_rank = n;
    let mut power = CMatrix::identity(n, n);
    for k in 0..=n {
        power = &power * a;
        let cut = gain * default_rank_tol(n, n, scale.powi(k as i32 + 1));
        let r = matrix_rank(&power, Some(cut), slice)?;
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
    }
    Ok(n)
}

/// Drazin inverse of one slice via `a^k * (a^(2k+1))^+ * a^k`, valid for any
/// `k` at least the index of `a`.
///
/// The rank cutoff inside the pseudoinverse is anchored to `anchor^(2k+1)`
/// rather than to the power's own largest singular value: a nilpotent `a`
/// makes `a^(2k+1)` numerically zero, and measuring that residue against
/// itself would count rounding noise as full rank and return its enormous
/// reciprocals instead of the correct zero inverse. `anchor` and `gain` have
/// the same meaning as in [`matrix_index`].
pub(crate) fn matrix_drazin(
    a: &CMatrix,
    k: usize,
    anchor: Option<f64>,
    gain: f64,
    slice: usize,
) -> Result<CMatrix> {
    let n = a.nrows();
    let scale = match anchor {
        Some(s) => s,
        None => svd_full(a, slice)?.sigma.first().copied().unwrap_or(0.0),
    };
    let cut = gain * default_rank_tol(n, n, scale.powi(2 * k as i32 + 1));
    let ak = matrix_power(a, k);
    let mid = pinv(&matrix_power(a, 2 * k + 1), Some(cut), slice)?;
    Ok(&ak * mid * &ak)
}
