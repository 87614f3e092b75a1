//! Closed-form solution families for the five multilinear systems resolved
//! by the inverse families.
//!
//! Each solver returns the complete family of solutions as a particular
//! solution plus a projector applied to a free tensor: left-free families are
//! `X = particular + projector * Z`, right-free families are
//! `X = particular + Z * projector`. The projectors (`I - G*A`, `I - A*A^+`,
//! `I - A*A^D`) are idempotent, which is what makes every instantiation a
//! solution and the reconstruction `X = particular + projector * X` hold for
//! any solution `X`.

use crate::error::{Error, Result};
use crate::inverses::{
    drazin_inverse, mp_inverse, one_d_inverse, one_inverse, one_mp_inverse, one_star_inverse,
    OneInverseParams,
};
use crate::product::{identity_tensor, m_product};
use crate::tensor::{tensor_add, tensor_sub, DenseTensor3};
use crate::transform::TransformSpec;

/// Which side of the family the free tensor enters on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeSide {
    /// `X = particular + projector * Z`.
    LeftFree,
    /// `X = particular + Z * projector`.
    RightFree,
}

/// The complete solution set of one system: every solution is an
/// instantiation, and every instantiation is a solution.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    /// The `Z = 0` member.
    pub particular: DenseTensor3,
    /// Idempotent tensor absorbing the free term.
    pub projector: DenseTensor3,
    /// How [`Self::instantiate`] combines the pieces.
    pub side: FreeSide,
}

impl SolutionFamily {
    /// The member of the family selected by the free tensor `z`.
    pub fn instantiate(&self, z: &DenseTensor3, t: &TransformSpec) -> Result<DenseTensor3> {
        let free = match self.side {
            FreeSide::LeftFree => m_product(&self.projector, z, t)?,
            FreeSide::RightFree => m_product(z, &self.projector, t)?,
        };
        tensor_add(&self.particular, &free)
    }

    /// Shape the free tensor must have to instantiate this family.
    pub fn free_shape(&self) -> (usize, usize, usize) {
        match self.side {
            FreeSide::LeftFree => (
                self.projector.n2(),
                self.particular.n2(),
                self.particular.n3(),
            ),
            FreeSide::RightFree => (
                self.particular.n1(),
                self.projector.n1(),
                self.particular.n3(),
            ),
        }
    }
}

fn check_rhs(a: &DenseTensor3, b: &DenseTensor3, op: &'static str) -> Result<()> {
    if b.n1() != a.n1() || b.n3() != a.n3() {
        return Err(Error::shape(
            op,
            format!(
                "right-hand side must be {}xpx{}, got {}x{}x{}",
                a.n1(),
                a.n3(),
                b.n1(),
                b.n2(),
                b.n3()
            ),
        ));
    }
    Ok(())
}

/// `I - G*A` for the inner inverse selected by `params`: the left-free
/// projector shared by the three projected systems.
fn left_projector(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<DenseTensor3> {
    let g = one_inverse(a, t, params)?;
    let ga = m_product(&g, a, t)?;
    tensor_sub(&identity_tensor(a.n2(), t), &ga)
}

/// Family of `A * X = A * A^+ * B`: particular solution `A^{-,dagger} * B`,
/// free term `(I - G*A) * Z`.
pub fn solve_mp_projected(
    a: &DenseTensor3,
    b: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<SolutionFamily> {
    check_rhs(a, b, "solve_mp_projected")?;
    let particular = m_product(&one_mp_inverse(a, t, params)?, b, t)?;
    Ok(SolutionFamily {
        particular,
        projector: left_projector(a, t, params)?,
        side: FreeSide::LeftFree,
    })
}

/// Family of `X * A * A^+ = A^{-,dagger}`: particular solution `G` itself,
/// free term `Z * (I - A*A^+)`.
pub fn solve_mp_right(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<SolutionFamily> {
    let particular = one_inverse(a, t, params)?;
    let ax = m_product(a, &mp_inverse(a, t)?, t)?;
    let projector = tensor_sub(&identity_tensor(a.n1(), t), &ax)?;
    Ok(SolutionFamily {
        particular,
        projector,
        side: FreeSide::RightFree,
    })
}

/// Family of `A * X = A * A^D * B` for square `A`: particular solution
/// `A^{-,D} * B`, free term `(I - G*A) * Z`.
pub fn solve_drazin_projected(
    a: &DenseTensor3,
    b: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<SolutionFamily> {
    check_rhs(a, b, "solve_drazin_projected")?;
    let particular = m_product(&one_d_inverse(a, t, params)?, b, t)?;
    Ok(SolutionFamily {
        particular,
        projector: left_projector(a, t, params)?,
        side: FreeSide::LeftFree,
    })
}

/// Family of `X * A * A^D = A^{-,D}` for square `A`: particular solution `G`
/// itself, free term `Z * (I - A*A^D)`.
pub fn solve_drazin_right(
    a: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<SolutionFamily> {
    let particular = one_inverse(a, t, params)?;
    let ad = m_product(a, &drazin_inverse(a, t)?, t)?;
    let projector = tensor_sub(&identity_tensor(a.n1(), t), &ad)?;
    Ok(SolutionFamily {
        particular,
        projector,
        side: FreeSide::RightFree,
    })
}

/// Family of `A * X = A * A^H * B`: particular solution `A^{-,*} * B`, free
/// term `(I - G*A) * Z`.
pub fn solve_star_projected(
    a: &DenseTensor3,
    b: &DenseTensor3,
    t: &TransformSpec,
    params: &OneInverseParams,
) -> Result<SolutionFamily> {
    check_rhs(a, b, "solve_star_projected")?;
    let particular = m_product(&one_star_inverse(a, t, params)?, b, t)?;
    Ok(SolutionFamily {
        particular,
        projector: left_projector(a, t, params)?,
        side: FreeSide::LeftFree,
    })
}
