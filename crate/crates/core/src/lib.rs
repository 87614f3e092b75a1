//! Algebra of third-order complex tensors under a transform-induced product.
//!
//! A nonsingular mixing matrix `M` turns the set of `n1 x n2 x n3` complex
//! tensors into a matrix-like algebra: transform along the third mode,
//! multiply frontal slices pairwise, transform back. This crate implements
//! that product together with the generalized inverses it supports
//! (Moore-Penrose, inner inverses with free parameters, Drazin, and the mixed
//! families combining an inner inverse with a projector), solvers for the
//! multilinear systems those inverses resolve, and a verification engine that
//! measures how well a claimed inverse satisfies its defining equations.

mod error;
pub mod fixtures;
mod inverses;
mod matfun;
mod product;
pub mod random;
mod solve;
mod tensor;
mod transform;
mod verify;

pub use error::{Error, Result};
pub use inverses::{
    drazin_inverse, exact_inverse, mp_inverse, one_d_inverse, one_inverse, one_inverse_random,
    one_mp_inverse, one_star_inverse, slice_svd, star_of, tensor_index, IndexResult,
    OneInverseParams, ParamBlocks, Provenance, SliceSvd, SvdFactors, ONE_INVERSE_ACCEPT_TOL,
};
pub use product::{conj_transpose, facewise_product, identity_tensor, m_product, tensor_power};
pub use solve::{
    solve_drazin_projected, solve_drazin_right, solve_mp_projected, solve_mp_right,
    solve_star_projected, FreeSide, SolutionFamily,
};
pub use tensor::{
    frontal_slice, max_abs_diff, mode3_fold, mode3_unfold, tensor_add, tensor_scale, tensor_sub,
    C64, CMatrix, DenseTensor3,
};
pub use transform::{inverse_transform, transform, TransformSpec, ILL_CONDITION_LIMIT};
pub use verify::{
    check_drazin, check_exact, check_one_d, check_one_inverse, check_one_mp_system,
    check_one_star, check_penrose, Claim, Residual, VerificationReport, DEFAULT_VERIFY_TOL,
};
