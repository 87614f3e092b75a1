//! Seeded generation of test tensors and transforms.
//!
//! Everything here is fully determined by the supplied seed: slice `k` draws
//! from an independent stream of a counter-based generator keyed by `(seed,
//! k)`, so results do not depend on traversal order and repeated runs are
//! byte-identical.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::{C64, CMatrix, DenseTensor3};
use crate::transform::{from_hat_slices, TransformSpec};

fn slice_rng(seed: u64, slice: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(slice as u64);
    rng
}

/// One draw from the standard complex Gaussian: independent `N(0,1)` real and
/// imaginary parts via the Box-Muller transform.
pub(crate) fn complex_gaussian<R: Rng>(rng: &mut R) -> C64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]: keeps ln() finite
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * PI * u2;
    C64::new(r * theta.cos(), r * theta.sin())
}

fn gaussian_matrix<R: Rng>(n1: usize, n2: usize, rng: &mut R) -> CMatrix {
    let data: Vec<C64> = (0..n1 * n2).map(|_| complex_gaussian(rng)).collect();
    CMatrix::from_vec(n1, n2, data)
}

fn unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    gaussian_matrix(n, n, rng).qr().q()
}

/// A random matrix with condition number at most 2: `Q1 * diag(s) * Q2^H`
/// with `s` drawn from `[1, 2]`.
fn well_conditioned<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let q1 = unitary(n, rng);
    let q2 = unitary(n, rng);
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = C64::new(1.0 + rng.gen::<f64>(), 0.0);
    }
    q1 * d * q2.adjoint()
}

/// Tensor with independent standard-complex-Gaussian entries.
pub fn random_tensor(n1: usize, n2: usize, n3: usize, seed: u64) -> DenseTensor3 {
    let mut a = DenseTensor3::zeros(n1, n2, n3);
    for k in 0..n3 {
        let mut rng = slice_rng(seed, k);
        for j in 0..n2 {
            for i in 0..n1 {
                *a.at_mut(i, j, k) = complex_gaussian(&mut rng);
            }
        }
    }
    a
}

/// A Haar-style random unitary matrix (QR of a Gaussian matrix).
pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    unitary(n, &mut slice_rng(seed, 0))
}

/// A random well-conditioned mixing transform: singular values in `[1, 2]`,
/// so the condition estimate never exceeds 2.
pub fn random_transform(n3: usize, seed: u64) -> TransformSpec {
    let m = well_conditioned(n3, &mut slice_rng(seed, 0));
    TransformSpec::new(m).expect("condition number is at most 2 by construction")
}

/// A square `n x n` slice whose index is exactly `k`: a `k x k` nilpotent
/// shift block direct-summed with an invertible block, conjugated by a
/// well-conditioned similarity. The rank of the `j`-th power is
/// `(k - j) + (n - k)` until it stabilizes at `j = k`.
fn slice_with_index<R: Rng>(n: usize, k: usize, rng: &mut R) -> CMatrix {
    let mut block = CMatrix::zeros(n, n);
    for i in 0..k.saturating_sub(1) {
        block[(i, i + 1)] = C64::new(1.0, 0.0);
    }
    if n > k {
        let r = well_conditioned(n - k, rng);
        for i in 0..n - k {
            for j in 0..n - k {
                block[(k + i, k + j)] = r[(i, j)];
            }
        }
    }
    let s = well_conditioned(n, rng);
    let s_inv = s.clone().try_inverse().expect("condition number at most 2");
    &s * block * s_inv
}

/// A square tensor whose overall index is exactly `k`: transformed slice 0 is
/// constructed with index `k`, the remaining slices with random indices in
/// `0..=k`, and the result is mapped back through the transform.
///
/// Fails when `k > n` (an `n x n` matrix has index at most `n`).
pub fn tensor_with_index(
    n: usize,
    k: usize,
    seed: u64,
    t: &TransformSpec,
) -> Result<DenseTensor3> {
    if k > n {
        return Err(Error::InvalidSelector {
            op: "tensor_with_index",
            detail: format!("index {k} exceeds the slice dimension {n}"),
        });
    }
    let slices: Vec<CMatrix> = (0..t.n3())
        .map(|s| {
            let mut rng = slice_rng(seed, s);
            let slice_index = if s == 0 { k } else { rng.gen_range(0..=k) };
            slice_with_index(n, slice_index, &mut rng)
        })
        .collect();
    Ok(from_hat_slices(&slices, t).expect("slice shapes are uniform by construction"))
}

/// A tensor idempotent under the product (`A * A = A`): every transformed
/// slice is an oblique projector `S * (I_r (+) 0) * S^-1` of random rank
/// between 1 and `n`, so no slice degenerates to pure rounding residue.
pub fn random_idempotent(n: usize, seed: u64, t: &TransformSpec) -> DenseTensor3 {
    let slices: Vec<CMatrix> = (0..t.n3())
        .map(|s| {
            let mut rng = slice_rng(seed, s);
            let r = rng.gen_range(1..=n);
            let mut d = CMatrix::zeros(n, n);
            for i in 0..r {
                d[(i, i)] = C64::new(1.0, 0.0);
            }
            let sm = well_conditioned(n, &mut rng);
            let sm_inv = sm.clone().try_inverse().expect("condition number at most 2");
            &sm * d * sm_inv
        })
        .collect();
    from_hat_slices(&slices, t).expect("slice shapes are uniform by construction")
}
