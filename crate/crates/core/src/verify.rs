//! Residual-based verification of claimed inverses.
//!
//! Each check takes the original tensor, a candidate inverse, and the claim
//! being made, evaluates every defining equation of that claim in the
//! original (untransformed) domain, and reports one named Frobenius-norm
//! residual per equation. A claim passes when every residual is at most
//! `tolerance * scale` with `scale = max(|A|_F, 1)`, so verdicts are
//! insensitive to the overall magnitude of the data.

use std::fmt;

use crate::error::{Error, Result};
use crate::inverses::{drazin_inverse, mp_inverse, star_of, tensor_index, ONE_INVERSE_ACCEPT_TOL};
use crate::product::{identity_tensor, m_product};
use crate::tensor::{tensor_sub, DenseTensor3};
use crate::transform::TransformSpec;

/// Tolerance used by the command-line verifier when none is given.
pub const DEFAULT_VERIFY_TOL: f64 = 1e-8;

/// Which inverse the candidate tensor is claimed to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    Mp,
    OneMp,
    Drazin,
    OneD,
    OneStar,
    Exact,
    OneInverse,
}

impl Claim {
    /// Stable lowercase name, matching the command-line claim vocabulary.
    pub fn name(self) -> &'static str {
        match self {
            Claim::Mp => "mp",
            Claim::OneMp => "one-mp",
            Claim::Drazin => "drazin",
            Claim::OneD => "one-d",
            Claim::OneStar => "one-star",
            Claim::Exact => "exact",
            Claim::OneInverse => "one-inverse",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One defining equation's Frobenius-norm residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: &'static str,
    pub value: f64,
}

/// Outcome of checking one claim: every defining equation's residual, the
/// tolerance the verdict used, and the scale the tolerance was relative to.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim: Claim,
    pub residuals: Vec<Residual>,
    pub tolerance: f64,
    pub scale: f64,
    pub pass: bool,
}

impl VerificationReport {
    fn new(claim: Claim, residuals: Vec<Residual>, tolerance: f64, scale: f64) -> Self {
        let pass = residuals.iter().all(|r| r.value <= tolerance * scale);
        VerificationReport {
            claim,
            residuals,
            tolerance,
            scale,
            pass,
        }
    }

    /// Largest residual divided by scale: the claim's distance from holding.
    pub fn worst_relative(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.value / self.scale)
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim: {}", self.claim)?;
        writeln!(f, "tolerance: {:e}", self.tolerance)?;
        writeln!(f, "scale: {:e}", self.scale)?;
        for r in &self.residuals {
            writeln!(f, "{}: {:e}", r.name, r.value)?;
        }
        write!(f, "pass: {}", self.pass)
    }
}

fn scale_of(a: &DenseTensor3) -> f64 {
    a.frobenius_norm().max(1.0)
}

fn diff_norm(x: &DenseTensor3, y: &DenseTensor3) -> Result<f64> {
    Ok(tensor_sub(x, y)?.frobenius_norm())
}

/// Checks that `x` is shaped like an inverse of `a`: `n2 x n1` slices over
/// the same number of faces.
fn check_inverse_shape(a: &DenseTensor3, x: &DenseTensor3, op: &'static str) -> Result<()> {
    if x.n1() != a.n2() || x.n2() != a.n1() || x.n3() != a.n3() {
        return Err(Error::shape(
            op,
            format!(
                "candidate must be {}x{}x{}, got {}x{}x{}",
                a.n2(),
                a.n1(),
                a.n3(),
                x.n1(),
                x.n2(),
                x.n3()
            ),
        ));
    }
    Ok(())
}

/// Rejects an `a_minus` argument that does not satisfy `A * G * A = A`;
/// checks downstream of a bogus inner inverse would be meaningless.
fn require_one_inverse(
    a: &DenseTensor3,
    g: &DenseTensor3,
    t: &TransformSpec,
    op: &'static str,
) -> Result<()> {
    check_inverse_shape(a, g, op)?;
    let aga = m_product(&m_product(a, g, t)?, a, t)?;
    let residual = diff_norm(&aga, a)? / scale_of(a);
    if residual > ONE_INVERSE_ACCEPT_TOL {
        return Err(Error::NotOneInverse {
            residual,
            tol: ONE_INVERSE_ACCEPT_TOL,
        });
    }
    Ok(())
}

/// Residuals of the requested Penrose equations (numbered 1 through 4):
/// `A*X*A = A`, `X*A*X = X`, `(A*X)^* = A*X`, `(X*A)^* = X*A`.
pub fn check_penrose(
    a: &DenseTensor3,
    x: &DenseTensor3,
    t: &TransformSpec,
    subset: &[usize],
    tol: f64,
) -> Result<VerificationReport> {
    check_inverse_shape(a, x, "check_penrose")?;
    if subset.is_empty() {
        return Err(Error::InvalidSelector {
            op: "check_penrose",
            detail: "empty Penrose equation subset".into(),
        });
    }
    let mut wanted = subset.to_vec();
    wanted.sort_unstable();
    wanted.dedup();

    let ax = m_product(a, x, t)?;
    let xa = m_product(x, a, t)?;
    let mut residuals = Vec::new();
    for eq in wanted {
        let (name, value) = match eq {
            1 => ("penrose_1", diff_norm(&m_product(&ax, a, t)?, a)?),
            2 => ("penrose_2", diff_norm(&m_product(x, &ax, t)?, x)?),
            3 => ("penrose_3", diff_norm(&star_of(&ax, t)?, &ax)?),
            4 => ("penrose_4", diff_norm(&star_of(&xa, t)?, &xa)?),
            other => {
                return Err(Error::InvalidSelector {
                    op: "check_penrose",
                    detail: format!("Penrose equation {other} (valid: 1..=4)"),
                })
            }
        };
        residuals.push(Residual { name, value });
    }
    Ok(VerificationReport::new(
        Claim::Mp,
        residuals,
        tol,
        scale_of(a),
    ))
}

/// Residuals of the three Drazin equations at `k = max(ind(A), 1)`:
/// `X*A^(k+1) = A^k`, `X*A*X = X`, `A*X = X*A`.
pub fn check_drazin(
    a: &DenseTensor3,
    x: &DenseTensor3,
    t: &TransformSpec,
    tol: f64,
) -> Result<VerificationReport> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "check_drazin",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    check_inverse_shape(a, x, "check_drazin")?;
    let k = tensor_index(a, t)?.overall.max(1);
    let ak = crate::product::tensor_power(a, k, t)?;
    let ak1 = m_product(&ak, a, t)?;
    let ax = m_product(a, x, t)?;
    let xa = m_product(x, a, t)?;
    let residuals = vec![
        Residual {
            name: "drazin_1",
            value: diff_norm(&m_product(x, &ak1, t)?, &ak)?,
        },
        Residual {
            name: "drazin_2",
            value: diff_norm(&m_product(x, &ax, t)?, x)?,
        },
        Residual {
            name: "drazin_3",
            value: diff_norm(&ax, &xa)?,
        },
    ];
    Ok(VerificationReport::new(
        Claim::Drazin,
        residuals,
        tol,
        scale_of(a),
    ))
}

/// Residuals of the three-equation system pinning the inner-and-Drazin
/// inverse for the given `a_minus`: `X*A*X = X`, `X*A^k = A^-*A^k`,
/// `A*X = A*A^D`. Rejects an `a_minus` that is not an inner inverse.
pub fn check_one_d(
    a: &DenseTensor3,
    x: &DenseTensor3,
    a_minus: &DenseTensor3,
    t: &TransformSpec,
    tol: f64,
) -> Result<VerificationReport> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "check_one_d",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    check_inverse_shape(a, x, "check_one_d")?;
    require_one_inverse(a, a_minus, t, "check_one_d")?;
    let k = tensor_index(a, t)?.overall.max(1);
    let ak = crate::product::tensor_power(a, k, t)?;
    let ax = m_product(a, x, t)?;
    let ad = drazin_inverse(a, t)?;
    let residuals = vec![
        Residual {
            name: "one_d_1",
            value: diff_norm(&m_product(x, &ax, t)?, x)?,
        },
        Residual {
            name: "one_d_2",
            value: diff_norm(&m_product(x, &ak, t)?, &m_product(a_minus, &ak, t)?)?,
        },
        Residual {
            name: "one_d_3",
            value: diff_norm(&ax, &m_product(a, &ad, t)?)?,
        },
    ];
    Ok(VerificationReport::new(
        Claim::OneD,
        residuals,
        tol,
        scale_of(a),
    ))
}

/// Residuals of the three-equation system pinning the inner-and-adjoint
/// inverse for the given `a_minus`, with `(A^+)^*` computed internally:
/// `X*(A^+)^**X = X`, `A*X = A*A^*`, `X*(A^+)^* = A^-*A`.
pub fn check_one_star(
    a: &DenseTensor3,
    x: &DenseTensor3,
    a_minus: &DenseTensor3,
    t: &TransformSpec,
    tol: f64,
) -> Result<VerificationReport> {
    check_inverse_shape(a, x, "check_one_star")?;
    require_one_inverse(a, a_minus, t, "check_one_star")?;
    let dagger_star = star_of(&mp_inverse(a, t)?, t)?;
    let x_ds = m_product(x, &dagger_star, t)?;
    let residuals = vec![
        Residual {
            name: "one_star_1",
            value: diff_norm(&m_product(&x_ds, x, t)?, x)?,
        },
        Residual {
            name: "one_star_2",
            value: diff_norm(
                &m_product(a, x, t)?,
                &m_product(a, &star_of(a, t)?, t)?,
            )?,
        },
        Residual {
            name: "one_star_3",
            value: diff_norm(&x_ds, &m_product(a_minus, a, t)?)?,
        },
    ];
    Ok(VerificationReport::new(
        Claim::OneStar,
        residuals,
        tol,
        scale_of(a),
    ))
}

/// Residuals of the two-equation system whose solutions are exactly the
/// inner-and-Moore-Penrose inverses: `X*A*X = X`, `A*X = A*A^+`. Membership
/// can therefore be verified without knowing which inner inverse produced
/// the candidate.
pub fn check_one_mp_system(
    a: &DenseTensor3,
    x: &DenseTensor3,
    t: &TransformSpec,
    tol: f64,
) -> Result<VerificationReport> {
    check_inverse_shape(a, x, "check_one_mp_system")?;
    let ax = m_product(a, x, t)?;
    let mp = mp_inverse(a, t)?;
    let residuals = vec![
        Residual {
            name: "one_mp_1",
            value: diff_norm(&m_product(x, &ax, t)?, x)?,
        },
        Residual {
            name: "one_mp_2",
            value: diff_norm(&ax, &m_product(a, &mp, t)?)?,
        },
    ];
    Ok(VerificationReport::new(
        Claim::OneMp,
        residuals,
        tol,
        scale_of(a),
    ))
}

/// Residuals of two-sided exact inversion: `A*X = I`, `X*A = I`.
pub fn check_exact(
    a: &DenseTensor3,
    x: &DenseTensor3,
    t: &TransformSpec,
    tol: f64,
) -> Result<VerificationReport> {
    if !a.is_square() {
        return Err(Error::NonSquare {
            op: "check_exact",
            n1: a.n1(),
            n2: a.n2(),
        });
    }
    check_inverse_shape(a, x, "check_exact")?;
    let eye = identity_tensor(a.n1(), t);
    let residuals = vec![
        Residual {
            name: "exact_1",
            value: diff_norm(&m_product(a, x, t)?, &eye)?,
        },
        Residual {
            name: "exact_2",
            value: diff_norm(&m_product(x, a, t)?, &eye)?,
        },
    ];
    Ok(VerificationReport::new(
        Claim::Exact,
        residuals,
        tol,
        scale_of(a),
    ))
}

/// Residual of the single inner-inverse equation `A*X*A = A`.
pub fn check_one_inverse(
    a: &DenseTensor3,
    x: &DenseTensor3,
    t: &TransformSpec,
    tol: f64,
) -> Result<VerificationReport> {
    check_inverse_shape(a, x, "check_one_inverse")?;
    let axa = m_product(&m_product(a, x, t)?, a, t)?;
    let residuals = vec![Residual {
        name: "one_inverse_1",
        value: diff_norm(&axa, a)?,
    }];
    Ok(VerificationReport::new(
        Claim::OneInverse,
        residuals,
        tol,
        scale_of(a),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverses::{
        exact_inverse, one_d_inverse, one_inverse, one_mp_inverse, one_star_inverse, slice_svd,
        OneInverseParams,
    };
    use crate::random::{random_tensor, random_transform, tensor_with_index};

    fn seeded_params(a: &DenseTensor3, t: &TransformSpec, seed: u64) -> OneInverseParams {
        OneInverseParams::seeded(&slice_svd(a, t, None).unwrap(), seed)
    }

    #[test]
    fn mp_inverse_passes_all_four_penrose_equations() {
        let t = random_transform(3, 40);
        let a = random_tensor(3, 2, 3, 41);
        let x = mp_inverse(&a, &t).unwrap();
        let report = check_penrose(&a, &x, &t, &[1, 2, 3, 4], 1e-10).unwrap();
        assert!(report.pass, "{report}");
        assert_eq!(report.residuals.len(), 4);
    }

    #[test]
    fn identity_has_exactly_zero_penrose_residuals() {
        let t = TransformSpec::identity(2);
        let eye = identity_tensor(3, &t);
        let report = check_penrose(&eye, &eye, &t, &[1, 2, 3, 4], 1e-12).unwrap();
        for r in &report.residuals {
            assert_eq!(r.value, 0.0, "{}", r.name);
        }
    }

    #[test]
    fn one_mp_passes_first_three_penrose_equations_but_not_the_fourth() {
        // A wide tensor with deficient slices leaves room for a nonzero free
        // block, which breaks hermiticity of X*A but nothing else.
        let t = random_transform(3, 42);
        let a = {
            let thin = random_tensor(3, 1, 3, 43);
            let wide = m_product(&thin, &random_tensor(1, 3, 3, 44), &t).unwrap();
            wide
        };
        let params = seeded_params(&a, &t, 7);
        let x = one_mp_inverse(&a, &t, &params).unwrap();
        let partial = check_penrose(&a, &x, &t, &[1, 2, 3], 1e-9).unwrap();
        assert!(partial.pass, "{partial}");
        let full = check_penrose(&a, &x, &t, &[4], 1e-9).unwrap();
        assert!(!full.pass, "free parameters should break equation 4");
    }

    #[test]
    fn penrose_subset_is_validated() {
        let t = TransformSpec::identity(2);
        let eye = identity_tensor(2, &t);
        assert!(check_penrose(&eye, &eye, &t, &[], 1e-8).is_err());
        assert!(check_penrose(&eye, &eye, &t, &[5], 1e-8).is_err());
    }

    #[test]
    fn drazin_inverse_passes_and_mp_fails_for_an_index_two_tensor() {
        let t = random_transform(3, 45);
        let a = tensor_with_index(3, 2, 46, &t).unwrap();
        let d = drazin_inverse(&a, &t).unwrap();
        let report = check_drazin(&a, &d, &t, 1e-8).unwrap();
        assert!(report.pass, "{report}");

        let mp = mp_inverse(&a, &t).unwrap();
        let report = check_drazin(&a, &mp, &t, 1e-8).unwrap();
        assert!(!report.pass, "MP inverse is not the Drazin inverse here");
    }

    #[test]
    fn one_d_triple_passes_and_rejects_a_bogus_inner_inverse() {
        let t = random_transform(3, 47);
        let a = tensor_with_index(3, 1, 48, &t).unwrap();
        let params = seeded_params(&a, &t, 9);
        let g = one_inverse(&a, &t, &params).unwrap();
        let x = one_d_inverse(&a, &t, &params).unwrap();
        let report = check_one_d(&a, &x, &g, &t, 1e-8).unwrap();
        assert!(report.pass, "{report}");

        let junk = random_tensor(3, 3, 3, 49);
        assert!(matches!(
            check_one_d(&a, &x, &junk, &t, 1e-8),
            Err(Error::NotOneInverse { .. })
        ));
    }

    #[test]
    fn one_star_passes_for_its_construction_and_fails_for_mp() {
        let t = random_transform(3, 50);
        let a = random_tensor(2, 3, 3, 51);
        let params = seeded_params(&a, &t, 11);
        let g = one_inverse(&a, &t, &params).unwrap();
        let x = one_star_inverse(&a, &t, &params).unwrap();
        let report = check_one_star(&a, &x, &g, &t, 1e-8).unwrap();
        assert!(report.pass, "{report}");

        let mp = mp_inverse(&a, &t).unwrap();
        let report = check_one_star(&a, &mp, &g, &t, 1e-8).unwrap();
        assert!(!report.pass, "A^+ does not satisfy A*X = A*A^* in general");
    }

    #[test]
    fn one_mp_system_accepts_both_constructions_and_rejects_an_inner_inverse() {
        let t = random_transform(3, 52);
        let a = {
            let thin = random_tensor(3, 1, 3, 53);
            m_product(&thin, &random_tensor(1, 3, 3, 54), &t).unwrap()
        };
        let params = seeded_params(&a, &t, 13);
        let x = one_mp_inverse(&a, &t, &params).unwrap();
        assert!(check_one_mp_system(&a, &x, &t, 1e-9).unwrap().pass);
        let mp = mp_inverse(&a, &t).unwrap();
        assert!(check_one_mp_system(&a, &mp, &t, 1e-9).unwrap().pass);

        // A full inner inverse with nonzero leading free block satisfies
        // A*X*A = A but lands outside the inner-and-Moore-Penrose set.
        let g = one_inverse(&a, &t, &params).unwrap();
        assert!(check_one_inverse(&a, &g, &t, 1e-9).unwrap().pass);
        assert!(!check_one_mp_system(&a, &g, &t, 1e-9).unwrap().pass);
    }

    #[test]
    fn exact_check_matches_exact_inverse() {
        let t = random_transform(3, 55);
        let a = {
            let base = random_tensor(3, 3, 3, 56);
            let bump = crate::tensor::tensor_scale(
                &identity_tensor(3, &t),
                crate::tensor::C64::new(8.0, 0.0),
            );
            crate::tensor::tensor_add(&base, &bump).unwrap()
        };
        let inv = exact_inverse(&a, &t).unwrap();
        assert!(check_exact(&a, &inv, &t, 1e-10).unwrap().pass);
        assert!(!check_exact(&a, &a, &t, 1e-10).unwrap().pass);
    }

    #[test]
    fn reports_are_deterministic_and_display_flat_key_values() {
        let t = random_transform(3, 57);
        let a = random_tensor(2, 2, 3, 58);
        let x = mp_inverse(&a, &t).unwrap();
        let r1 = check_penrose(&a, &x, &t, &[1, 2, 3, 4], 1e-10).unwrap();
        let r2 = check_penrose(&a, &x, &t, &[1, 2, 3, 4], 1e-10).unwrap();
        assert_eq!(r1, r2);

        let text = r1.to_string();
        assert!(text.starts_with("claim: mp\n"), "{text}");
        assert!(text.contains("penrose_4: "), "{text}");
        assert!(text.ends_with("pass: true"), "{text}");
    }
}
