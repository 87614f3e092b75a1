//! Tensor-tensor products and the operations built directly on them.
//!
//! The face-wise product multiplies corresponding frontal slices; the full
//! product conjugates that by a mode-3 transform. Conjugate transposition and
//! the identity tensor are defined so that the familiar matrix identities
//! (`A * I = A`, `(C * D)^H = D^H * C^H`) carry over slice by slice in the
//! transformed domain.

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, DenseTensor3};
use crate::transform::{from_hat_slices, hat_slices, inverse_transform, transform, TransformSpec};

/// Multiplies corresponding frontal slices: `(C, D) -> [C^(k) * D^(k)]_k`.
///
/// Requires `C` to be `n1 x q x n3` and `D` to be `q x n2 x n3`.
pub fn facewise_product(c: &DenseTensor3, d: &DenseTensor3) -> Result<DenseTensor3> {
    if c.n2() != d.n1() || c.n3() != d.n3() {
        return Err(Error::shape(
            "facewise_product",
            format!(
                "cannot multiply {}x{}x{} by {}x{}x{}",
                c.n1(),
                c.n2(),
                c.n3(),
                d.n1(),
                d.n2(),
                d.n3()
            ),
        ));
    }
    let slices: Vec<CMatrix> = c
        .slices()
        .iter()
        .zip(d.slices().iter())
        .map(|(cs, ds)| cs * ds)
        .collect();
    DenseTensor3::from_slices(&slices)
}

/// The tensor-tensor product: transform, multiply face-wise, transform back.
pub fn m_product(c: &DenseTensor3, d: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    let ch = transform(c, t)?;
    let dh = transform(d, t)?;
    inverse_transform(&facewise_product(&ch, &dh)?, t)
}

/// Conjugate transpose with respect to the transform: each transformed slice
/// is replaced by its conjugate transpose, then mapped back.
///
/// Satisfies `(C * D)^H = D^H * C^H` under the same transform.
pub fn conj_transpose(a: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
    let hats: Vec<CMatrix> = hat_slices(a, t)?.iter().map(|s| s.adjoint()).collect();
    from_hat_slices(&hats, t)
}

/// The two-sided identity for the product: every transformed slice is the
/// `n x n` identity matrix.
///
/// For the identity transform this is the tensor whose every frontal slice is
/// `I_n`; in general the slices are mixed by `M^-1`.
pub fn identity_tensor(n: usize, t: &TransformSpec) -> DenseTensor3 {
    let eye = CMatrix::identity(n, n);
    let slices: Vec<CMatrix> = (0..t.n3()).map(|_| eye.clone()).collect();
    from_hat_slices(&slices, t).expect("identity slices always fold back")
}

/// The `k`-th power of a square tensor under the product; `k = 0` yields the
/// identity tensor.
///
/// Powers are formed on the transformed slices, so one transform round-trip
/// covers the whole computation.
pub fn tensor_power(a: &DenseTensor3, k: usize, t: &TransformSpec) -> Result<DenseTensor3> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "tensor_power",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    let hats = hat_slices(a, t)?;
    let powered: Vec<CMatrix> = hats.iter().map(|s| matrix_power(s, k)).collect();
    from_hat_slices(&powered, t)
}

fn matrix_power(s: &CMatrix, k: usize) -> CMatrix {
    let n = s.nrows();
    let mut acc = CMatrix::identity(n, n);
    for _ in 0..k {
        acc = &acc * s;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{max_abs_diff, C64};

    fn sample(n1: usize, n2: usize, n3: usize, phase: f64) -> DenseTensor3 {
        DenseTensor3::from_fn(n1, n2, n3, |i, j, k| {
            C64::new(
                ((i + 2 * j + 3 * k) as f64 + phase).sin(),
                ((2 * i + j) as f64 - phase).cos(),
            )
        })
    }

    #[test]
    fn facewise_matches_slice_multiplication() {
        let c = sample(2, 3, 3, 0.0);
        let d = sample(3, 2, 3, 1.0);
        let p = facewise_product(&c, &d).unwrap();
        for k in 0..3 {
            let want = &c.slices()[k] * &d.slices()[k];
            assert!((&p.slices()[k] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn facewise_shape_mismatch_is_an_error() {
        let c = sample(2, 3, 3, 0.0);
        let d = sample(2, 2, 3, 0.0);
        assert!(facewise_product(&c, &d).is_err());
    }

    #[test]
    fn identity_transform_reduces_product_to_facewise() {
        let c = sample(2, 3, 4, 0.3);
        let d = sample(3, 2, 4, 0.7);
        let t = TransformSpec::identity(4);
        let via_product = m_product(&c, &d, &t).unwrap();
        let via_facewise = facewise_product(&c, &d).unwrap();
        assert!(max_abs_diff(&via_product, &via_facewise).unwrap() < 1e-14);
    }

    #[test]
    fn identity_tensor_is_neutral() {
        let t = TransformSpec::reference();
        let a = sample(2, 3, 3, 0.4);
        let left = identity_tensor(2, &t);
        let right = identity_tensor(3, &t);
        assert!(max_abs_diff(&m_product(&left, &a, &t).unwrap(), &a).unwrap() < 1e-12);
        assert!(max_abs_diff(&m_product(&a, &right, &t).unwrap(), &a).unwrap() < 1e-12);
    }

    #[test]
    fn product_is_associative() {
        let t = TransformSpec::reference();
        let a = sample(2, 3, 3, 0.1);
        let b = sample(3, 3, 3, 0.2);
        let c = sample(3, 2, 3, 0.3);
        let ab_c = m_product(&m_product(&a, &b, &t).unwrap(), &c, &t).unwrap();
        let a_bc = m_product(&a, &m_product(&b, &c, &t).unwrap(), &t).unwrap();
        assert!(max_abs_diff(&ab_c, &a_bc).unwrap() < 1e-12);
    }

    #[test]
    fn conj_transpose_reverses_products() {
        let t = TransformSpec::reference();
        let c = sample(2, 3, 3, 0.5);
        let d = sample(3, 2, 3, 0.9);
        let lhs = conj_transpose(&m_product(&c, &d, &t).unwrap(), &t).unwrap();
        let rhs = m_product(
            &conj_transpose(&d, &t).unwrap(),
            &conj_transpose(&c, &t).unwrap(),
            &t,
        )
        .unwrap();
        assert!(max_abs_diff(&lhs, &rhs).unwrap() < 1e-12);
    }

    #[test]
    fn conj_transpose_is_an_involution() {
        let t = TransformSpec::reference();
        let a = sample(3, 2, 3, 1.3);
        let twice = conj_transpose(&conj_transpose(&a, &t).unwrap(), &t).unwrap();
        assert!(max_abs_diff(&twice, &a).unwrap() < 1e-12);
    }

    #[test]
    fn zeroth_power_is_the_identity_tensor() {
        let t = TransformSpec::reference();
        let a = sample(3, 3, 3, 0.8);
        let p0 = tensor_power(&a, 0, &t).unwrap();
        assert!(max_abs_diff(&p0, &identity_tensor(3, &t)).unwrap() < 1e-12);
    }

    #[test]
    fn powers_agree_with_repeated_products() {
        let t = TransformSpec::reference();
        let a = sample(3, 3, 3, 0.2);
        let mut acc = identity_tensor(3, &t);
        for k in 0..4usize {
            let direct = tensor_power(&a, k, &t).unwrap();
            assert!(max_abs_diff(&direct, &acc).unwrap() < 1e-10, "k={k}");
            acc = m_product(&acc, &a, &t).unwrap();
        }
    }

    #[test]
    fn power_of_rectangular_tensor_is_rejected() {
        let t = TransformSpec::reference();
        let a = sample(2, 3, 3, 0.0);
        assert!(matches!(
            tensor_power(&a, 2, &t),
            Err(Error::NonSquare { .. })
        ));
    }
}
