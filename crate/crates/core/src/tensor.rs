//! Dense third-order complex tensors and the mode-3 unfolding.
//!
//! A [`DenseTensor3`] is an `n1 x n2 x n3` array of complex scalars. The
//! matrix obtained by fixing the third index is a *frontal slice*; slices are
//! the unit every product and factorization in this crate works on. Storage is
//! slice-major (the third index is outermost) and column-major within each
//! slice, so extracting a frontal slice is a contiguous copy.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix used for frontal slices and transforms.
pub type CMatrix = DMatrix<C64>;

/// A dense `n1 x n2 x n3` tensor of complex scalars.
///
/// Entry `(i, j, k)` lives at `data[k*n1*n2 + j*n1 + i]`. All indices are
/// zero-based.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<C64>,
}

impl DenseTensor3 {
    /// All-zero tensor of the given shape.
    ///
    /// # Panics
    /// Panics if any dimension is zero.
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        assert!(
            n1 > 0 && n2 > 0 && n3 > 0,
            "tensor dimensions must be positive, got {n1}x{n2}x{n3}"
        );
        DenseTensor3 {
            n1,
            n2,
            n3,
            data: vec![C64::new(0.0, 0.0); n1 * n2 * n3],
        }
    }

    /// Builds a tensor by evaluating `f(i, j, k)` for every entry.
    pub fn from_fn(
        n1: usize,
        n2: usize,
        n3: usize,
        mut f: impl FnMut(usize, usize, usize) -> C64,
    ) -> Self {
        let mut t = Self::zeros(n1, n2, n3);
        for k in 0..n3 {
            for j in 0..n2 {
                for i in 0..n1 {
                    let v = f(i, j, k);
                    t.data[k * n1 * n2 + j * n1 + i] = v;
                }
            }
        }
        t
    }

    /// Builds a tensor from its frontal slices (all must share one shape).
    pub fn from_slices(slices: &[CMatrix]) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::shape("from_slices", "no slices supplied"));
        }
        let (n1, n2) = (slices[0].nrows(), slices[0].ncols());
        for (k, s) in slices.iter().enumerate() {
            if s.nrows() != n1 || s.ncols() != n2 {
                return Err(Error::shape(
                    "from_slices",
                    format!(
                        "slice {k} is {}x{}, expected {n1}x{n2}",
                        s.nrows(),
                        s.ncols()
                    ),
                ));
            }
        }
        let mut t = Self::zeros(n1, n2, slices.len());
        for (k, s) in slices.iter().enumerate() {
            t.data[k * n1 * n2..(k + 1) * n1 * n2].copy_from_slice(s.as_slice());
        }
        Ok(t)
    }

    /// Builds a real-valued tensor from rows of integer-like literals; handy
    /// for fixtures. `rows[k][i][j]` is the real part of entry `(i, j, k)`.
    pub fn from_real_rows(rows: &[Vec<Vec<f64>>]) -> Result<Self> {
        let slices: Vec<CMatrix> = rows
            .iter()
            .map(|slice| {
                let n1 = slice.len();
                let n2 = if n1 > 0 { slice[0].len() } else { 0 };
                CMatrix::from_fn(n1, n2, |i, j| C64::new(slice[i][j], 0.0))
            })
            .collect();
        Self::from_slices(&slices)
    }

    /// Shape as `(n1, n2, n3)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn n3(&self) -> usize {
        self.n3
    }

    /// Whether every frontal slice is square (n1 = n2).
    pub fn is_square(&self) -> bool {
        self.n1 == self.n2
    }

    /// Entry `(i, j, k)`.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn at(&self, i: usize, j: usize, k: usize) -> C64 {
        assert!(i < self.n1 && j < self.n2 && k < self.n3, "index out of range");
        self.data[k * self.n1 * self.n2 + j * self.n1 + i]
    }

    /// Mutable access to entry `(i, j, k)`.
    ///
    /// # Panics
    /// Panics if an index is out of range.
    pub fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut C64 {
        assert!(i < self.n1 && j < self.n2 && k < self.n3, "index out of range");
        &mut self.data[k * self.n1 * self.n2 + j * self.n1 + i]
    }

    /// Raw storage in slice-major, column-major-within-slice order.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// Frobenius norm (square root of the sum of squared moduli).
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// All frontal slices as matrices.
    pub fn slices(&self) -> Vec<CMatrix> {
        (0..self.n3)
            .map(|k| frontal_slice(self, k).expect("k < n3"))
            .collect()
    }
}

/// The frontal slice `A(:, :, k)` as an `n1 x n2` matrix.
pub fn frontal_slice(a: &DenseTensor3, k: usize) -> Result<CMatrix> {
    if k >= a.n3 {
        return Err(Error::SliceIndexOutOfRange { k, n3: a.n3 });
    }
    let start = k * a.n1 * a.n2;
    Ok(CMatrix::from_column_slice(
        a.n1,
        a.n2,
        &a.data[start..start + a.n1 * a.n2],
    ))
}

/// Mode-3 unfolding: the `n3 x (n1*n2)` matrix `U` with
/// `U[k, j*n1 + i] = A(i, j, k)`.
///
/// Each column of `U` is one tube of the tensor: multiplying `U` from the left
/// mixes frontal slices, which is exactly how the mode-3 transform acts.
pub fn mode3_unfold(a: &DenseTensor3) -> CMatrix {
    CMatrix::from_fn(a.n3, a.n1 * a.n2, |k, col| a.data[k * a.n1 * a.n2 + col])
}

/// Inverse of [`mode3_unfold`]: refolds an `n3 x (n1*n2)` matrix into a tensor.
pub fn mode3_fold(u: &CMatrix, n1: usize, n2: usize) -> Result<DenseTensor3> {
    if u.ncols() != n1 * n2 {
        return Err(Error::shape(
            "mode3_fold",
            format!("matrix has {} columns, expected n1*n2 = {}", u.ncols(), n1 * n2),
        ));
    }
    let n3 = u.nrows();
    Ok(DenseTensor3::from_fn(n1, n2, n3, |i, j, k| u[(k, j * n1 + i)]))
}

/// Entrywise sum `a + b`.
pub fn tensor_add(a: &DenseTensor3, b: &DenseTensor3) -> Result<DenseTensor3> {
    if a.shape() != b.shape() {
        return Err(Error::shape(
            "tensor_add",
            format!("{:?} vs {:?}", a.shape(), b.shape()),
        ));
    }
    let mut out = a.clone();
    for (x, y) in out.data.iter_mut().zip(&b.data) {
        *x += y;
    }
    Ok(out)
}

/// Entrywise difference `a - b`.
pub fn tensor_sub(a: &DenseTensor3, b: &DenseTensor3) -> Result<DenseTensor3> {
    if a.shape() != b.shape() {
        return Err(Error::shape(
            "tensor_sub",
            format!("{:?} vs {:?}", a.shape(), b.shape()),
        ));
    }
    let mut out = a.clone();
    for (x, y) in out.data.iter_mut().zip(&b.data) {
        *x -= y;
    }
    Ok(out)
}

/// Scalar multiple `alpha * a`.
pub fn tensor_scale(a: &DenseTensor3, alpha: C64) -> DenseTensor3 {
    let mut out = a.clone();
    for x in out.data.iter_mut() {
        *x *= alpha;
    }
    out
}

/// Largest entrywise modulus of `a - b`; the shapes must agree.
pub fn max_abs_diff(a: &DenseTensor3, b: &DenseTensor3) -> Result<f64> {
    Ok(tensor_sub(a, b)?.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn storage_is_slice_major_column_major() {
        let t = DenseTensor3::from_fn(2, 3, 2, |i, j, k| c((100 * k + 10 * j + i) as f64, 0.0));
        // Slice 0, column 0 occupies the first n1 entries.
        assert_eq!(t.as_slice()[0], c(0.0, 0.0));
        assert_eq!(t.as_slice()[1], c(1.0, 0.0));
        assert_eq!(t.as_slice()[2], c(10.0, 0.0));
        // Slice 1 starts at offset n1*n2.
        assert_eq!(t.as_slice()[6], c(100.0, 0.0));
        assert_eq!(t.at(1, 2, 1), c(121.0, 0.0));
    }

    #[test]
    fn frontal_slice_extracts_the_fixed_k_matrix() {
        let t = DenseTensor3::from_fn(2, 2, 3, |i, j, k| c((k * 4 + j * 2 + i) as f64, 0.0));
        let s1 = frontal_slice(&t, 1).unwrap();
        assert_eq!(s1[(0, 0)], c(4.0, 0.0));
        assert_eq!(s1[(1, 1)], c(7.0, 0.0));
        assert!(matches!(
            frontal_slice(&t, 3),
            Err(Error::SliceIndexOutOfRange { k: 3, n3: 3 })
        ));
    }

    #[test]
    fn unfold_obeys_the_index_law_exactly() {
        // U[k, j*n1 + i] = A(i,j,k), with no arithmetic involved.
        let t = DenseTensor3::from_fn(2, 3, 4, |i, j, k| c(i as f64, (j * 10 + k) as f64));
        let u = mode3_unfold(&t);
        assert_eq!(u.nrows(), 4);
        assert_eq!(u.ncols(), 6);
        for k in 0..4 {
            for j in 0..3 {
                for i in 0..2 {
                    assert_eq!(u[(k, j * 2 + i)], t.at(i, j, k));
                }
            }
        }
    }

    #[test]
    fn unfold_of_tube_tensor_is_a_column() {
        let t = DenseTensor3::from_fn(1, 1, 5, |_, _, k| c(k as f64, -(k as f64)));
        let u = mode3_unfold(&t);
        assert_eq!((u.nrows(), u.ncols()), (5, 1));
        assert_eq!(u[(3, 0)], c(3.0, -3.0));
    }

    #[test]
    fn fold_round_trips_unfold() {
        let t = DenseTensor3::from_fn(3, 2, 2, |i, j, k| c((i + j) as f64, (j + k) as f64));
        let back = mode3_fold(&mode3_unfold(&t), 3, 2).unwrap();
        assert_eq!(t, back);
        assert!(mode3_fold(&mode3_unfold(&t), 4, 2).is_err());
    }

    #[test]
    fn fold_places_entries_by_index() {
        let u = CMatrix::from_fn(2, 6, |k, col| c((k * 6 + col) as f64, 0.0));
        let t = mode3_fold(&u, 2, 3).unwrap();
        for k in 0..2 {
            for j in 0..3 {
                for i in 0..2 {
                    assert_eq!(t.at(i, j, k), u[(k, j * 2 + i)]);
                }
            }
        }
    }

    #[test]
    fn add_scale_and_norm() {
        let a = DenseTensor3::from_fn(2, 2, 2, |i, j, k| c((i + j + k) as f64, 0.0));
        let doubled = tensor_add(&a, &a).unwrap();
        let scaled = tensor_scale(&a, c(2.0, 0.0));
        assert_eq!(doubled, scaled);
        let z = tensor_sub(&doubled, &scaled).unwrap();
        assert_eq!(z.frobenius_norm(), 0.0);
        let b = DenseTensor3::zeros(2, 2, 3);
        assert!(tensor_add(&a, &b).is_err());
    }
}
