//! Small integer worked examples shared by the documentation, the test
//! suites, and the CLI's `fixtures` subcommand.
//!
//! Every input is exact in double precision, and the mixing matrix is the
//! integer [`TransformSpec::reference`] matrix whose inverse is also
//! integral, so the documented expected outputs are reproducible to full
//! precision (the 1-MP expectations are printed to four decimals and carry a
//! correspondingly loose tolerance).

use crate::tensor::DenseTensor3;
use crate::transform::{inverse_transform, TransformSpec};

fn t3(slices: &[Vec<Vec<f64>>]) -> DenseTensor3 {
    DenseTensor3::from_real_rows(slices).expect("fixture shapes are consistent")
}

/// The mixing transform every fixture is defined against.
pub fn mixing_transform() -> TransformSpec {
    TransformSpec::reference()
}

/// 3x2x3 input whose zero-parameter 1-MP inverse has documented
/// four-decimal entries.
pub fn one_mp_input() -> DenseTensor3 {
    t3(&[
        vec![vec![1.0, -2.0], vec![0.0, -6.0], vec![0.0, 0.0]],
        vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![0.0, 0.0]],
        vec![vec![0.0, 3.0], vec![0.0, 6.0], vec![0.0, 0.0]],
    ])
}

/// Zero-parameter 1-MP inverse of [`one_mp_input`], to four decimals.
pub fn one_mp_expected() -> DenseTensor3 {
    t3(&[
        vec![
            vec![0.5323, 0.0646, 0.0],
            vec![0.5415, 0.0831, 0.0],
        ],
        vec![vec![0.04, 0.08, 0.0], vec![0.08, 0.16, 0.0]],
        vec![
            vec![-0.0323, -0.0646, 0.0],
            vec![-0.0415, -0.0831, 0.0],
        ],
    ])
}

/// 3x3x3 input of index 2 whose 1-D inverse against
/// [`one_d_inner_inverse`] has documented integer entries.
pub fn one_d_input() -> DenseTensor3 {
    t3(&[
        vec![vec![0.0, 1.0, 1.0], vec![0.0, -1.0, 0.0], vec![1.0, -1.0, 1.0]],
        vec![vec![1.0, 0.0, 1.0], vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]],
        vec![vec![0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![-1.0, 1.0, 0.0]],
    ])
}

/// A fixed inner inverse of [`one_d_input`] (satisfies `A * G * A = A`).
pub fn one_d_inner_inverse() -> DenseTensor3 {
    t3(&[
        vec![vec![1.0, 1.0, 1.0], vec![2.0, 1.0, -1.0], vec![0.0, 2.0, 1.0]],
        vec![vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0], vec![1.0, 1.0, -1.0]],
        vec![vec![0.0, 0.0, 0.0], vec![-1.0, -1.0, 0.0], vec![0.0, -2.0, 0.0]],
    ])
}

/// The 1-D inverse of [`one_d_input`] for [`one_d_inner_inverse`]; exact
/// integers.
pub fn one_d_expected() -> DenseTensor3 {
    t3(&[
        vec![vec![0.0, -2.0, 3.0], vec![1.0, -1.0, 1.0], vec![0.0, 3.0, -1.0]],
        vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 0.0, -1.0]],
        vec![vec![0.0, 2.0, -1.0], vec![-1.0, 1.0, -1.0], vec![0.0, -3.0, 2.0]],
    ])
}

/// 2x3x3 input for the documented composition `X = G * A * A^H`.
pub fn one_star_input() -> DenseTensor3 {
    t3(&[
        vec![vec![2.0, 0.0, 0.0], vec![0.0, 2.0, 1.0]],
        vec![vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]],
        vec![vec![-1.0, 0.0, 0.0], vec![0.0, -1.0, -1.0]],
    ])
}

/// The fixed left factor `G` of the documented composition
/// `X = G * A * A^H` over [`one_star_input`].
///
/// `G` is specified by its transformed slices (exact integers under the
/// integer reference transform). It is close to, but deliberately not, an
/// inner inverse of the input: the middle transformed slice deviates, which
/// is exactly what makes the composition a useful discrimination fixture.
pub fn one_star_g() -> DenseTensor3 {
    let hats = t3(&[
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]],
        vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 1.0]],
        vec![vec![0.0, 1.0], vec![0.0, 0.0], vec![1.0, 0.0]],
    ]);
    inverse_transform(&hats, &mixing_transform()).expect("slice counts match")
}

/// The composition `G * A * A^H` of [`one_star_g`] and [`one_star_input`];
/// exact integers.
pub fn one_star_expected() -> DenseTensor3 {
    t3(&[
        vec![vec![1.0, -1.0], vec![4.0, 6.0], vec![3.0, 5.0]],
        vec![vec![0.0, 0.0], vec![4.0, 5.0], vec![4.0, 5.0]],
        vec![vec![0.0, 1.0], vec![-4.0, -5.0], vec![-3.0, -5.0]],
    ])
}

/// 2x3x3 coefficient tensor for the documented 1-Star-projected system.
pub fn solve_star_input() -> DenseTensor3 {
    t3(&[
        vec![vec![0.0, 0.0, 1.0], vec![1.0, -1.0, 1.0]],
        vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]],
        vec![vec![0.0, 0.0, 0.0], vec![0.0, 1.0, -1.0]],
    ])
}

/// 2x1x3 right-hand side for the documented 1-Star-projected system.
pub fn solve_star_rhs() -> DenseTensor3 {
    t3(&[
        vec![vec![0.0], vec![2.0]],
        vec![vec![0.0], vec![1.0]],
        vec![vec![1.0], vec![-1.0]],
    ])
}

/// Solution of the documented system with zero parameters and zero free
/// term; exact integers.
pub fn solve_star_expected() -> DenseTensor3 {
    t3(&[
        vec![vec![0.0], vec![0.0], vec![2.0]],
        vec![vec![0.0], vec![0.0], vec![1.0]],
        vec![vec![1.0], vec![0.0], vec![-1.0]],
    ])
}
