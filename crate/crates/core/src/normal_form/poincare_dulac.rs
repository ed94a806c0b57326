//! Degree-by-degree equivariant Poincaré-Dulac normalization.

use num_complex::Complex64;

use crate::algebra::group::{check_commutes, equivariant_average, DiagonalGroup};
use crate::algebra::jet::{compose, invert, Jet};
use crate::algebra::linalg::{self, Matrix};
use crate::error::{AlgebraError, NormalFormError};
use crate::normal_form::homological::{homological_operator, homological_split, solve_homological};
use crate::normal_form::resonance::{check_attracting, resonances, ResonanceReport};
use crate::scalar::Scalar;

/// How the linear part was handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearTreatment {
    /// Already diagonal.
    Diagonal,
    /// Triangular with distinct eigenvalues, diagonalized by a recorded
    /// change of coordinates.
    Triangularized,
    /// Non-diagonal and resonance free: homological equation solved as a
    /// linear system.
    LinearSolve,
}

#[derive(Clone, Debug)]
pub struct NormalFormResult<S> {
    pub normal_form: Jet<S>,
    /// `Φ` with `Φ∘f = f̃∘Φ` up to the order.
    pub conjugacy: Jet<S>,
    /// `P` with `f` replaced by `P⁻¹∘f∘P` before normalizing; `Φ∘P` has
    /// identity linear part.
    pub pre_normalization: Option<Matrix<S>>,
    pub treatment: LinearTreatment,
    /// `Φ∘f − f̃∘Φ`.
    pub residual: Jet<S>,
    pub residual_norm: f64,
    /// `f̃∘γ − γ^k∘f̃`.
    pub group_residual_norm: f64,
    pub group: DiagonalGroup,
    pub k_twist: i64,
    pub resonance: Option<ResonanceReport<S>>,
}

impl<S: Scalar> NormalFormResult<S> {
    /// `true` when `f̃` has no terms of degree ≥ 2.
    pub fn is_linear(&self, tol: f64) -> bool {
        self.normal_form.nonlinear_part().is_negligible(tol)
    }
}

fn negligible<S: Scalar>(j: &Jet<S>, tol: f64) -> bool {
    if S::EXACT {
        j.is_zero()
    } else {
        j.is_negligible(tol)
    }
}

/// Spectral radius from `‖A^{2^j}‖^{1/2^j}` with renormalization.
fn spectral_radius<S: Scalar>(a: &Matrix<S>) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<Complex64>> = a.iter().map(|r| r.iter().map(S::to_complex).collect()).collect();
    let mut log_scale = 0.0;
    let mut estimate = f64::INFINITY;
    for j in 0..40 {
        let norm = m.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
        if norm == 0.0 {
            return 0.0;
        }
        let total = log_scale + norm.ln();
        estimate = (total / f64::from(2u32).powi(j)).exp();
        for x in m.iter_mut().flatten() {
            *x /= norm;
        }
        log_scale = 2.0 * total;
        let mut sq = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                for l in 0..n {
                    sq[i][l] += m[i][k] * m[k][l];
                }
            }
        }
        m = sq;
    }
    estimate
}

/// Reduces `k` modulo the group order and checks `gcd(k, p) = 1`.
pub fn normalize_twist(k: i64, p: u32) -> Result<i64, NormalFormError> {
    use num_integer::Integer;
    let k = k.rem_euclid(p as i64);
    if k.gcd(&(p as i64)) != 1 {
        return Err(NormalFormError::Gcd(format!("twist k = {k} is not prime to the group order {p}")));
    }
    Ok(k)
}

/// Normal form of `f` up to `order`, commuting with `γ` in the sense
/// `f̃∘γ = γ^k∘f̃`.
pub fn poincare_dulac<S: Scalar>(
    f: &Jet<S>,
    group: &DiagonalGroup,
    k_twist: i64,
    order: u32,
    tol: f64,
) -> Result<NormalFormResult<S>, NormalFormError> {
    if f.order() < order {
        return Err(AlgebraError::OrderUnderflow { have: f.order(), need: order }.into());
    }
    if group.dim() != f.dim() {
        return Err(AlgebraError::DimensionMismatch { left: f.dim(), right: group.dim() }.into());
    }
    let k = normalize_twist(k_twist, group.order())?;
    let f = f.with_order(order);
    let commutes = check_commutes(&f, group, k)?;
    if !negligible(&commutes, tol) {
        return Err(NormalFormError::NonCommuting {
            k,
            residual: format!("{:e}", commutes.max_modulus()),
        });
    }

    let a = f.linear_part();
    let (treatment, pre, work) = if linalg::is_diagonal(&a, 0.0) {
        (LinearTreatment::Diagonal, None, f.clone())
    } else if let Some(p) = linalg::triangular_eigenvectors(&a, tol) {
        let p_inv = linalg::inverse(&p, tol).ok_or(AlgebraError::SingularLinearPart)?;
        let conj = compose(&f, &Jet::from_linear(&p, order), order)?.left_linear(&p_inv);
        let cleaned = clear_off_diagonal(&conj);
        if negligible(&check_commutes(&cleaned, group, k)?, tol) {
            (LinearTreatment::Triangularized, Some(p), cleaned)
        } else {
            (LinearTreatment::LinearSolve, None, f.clone())
        }
    } else {
        (LinearTreatment::LinearSolve, None, f.clone())
    };

    let a = work.linear_part();
    let report = match treatment {
        LinearTreatment::LinearSolve => {
            if linalg::inverse(&a, tol).is_none() {
                return Err(AlgebraError::SingularLinearPart.into());
            }
            let rho = spectral_radius(&a);
            if rho >= 1.0 - 1e-12 {
                return Err(NormalFormError::NonAttracting { index: 0, modulus: format!("{rho}") });
            }
            None
        }
        _ => {
            let lambda = linalg::diagonal_entries(&a);
            check_attracting(&lambda)?;
            Some(resonances(&lambda, order, tol)?)
        }
    };

    let d = f.dim();
    let id = Jet::identity(d, order);
    let mut current = work;
    let mut phi_acc = id.clone();
    for degree in 2..=order {
        let g = current.homogeneous_part(degree);
        if negligible(&g, tol) {
            continue;
        }
        let (s, h) = match &report {
            Some(report) => {
                let split = homological_split(&g, report, tol)?;
                (
                    equivariant_average(&split.resonant, group, 1, k)?,
                    equivariant_average(&split.transform, group, 1, 1)?,
                )
            }
            None => {
                let h = solve_homological(&g, &a, degree, tol)?;
                let h = equivariant_average(&h, group, 1, 1)?;
                let check = homological_operator(&h, &a)?.sub(&g)?;
                if !negligible(&check, tol) {
                    return Err(NormalFormError::Unsupported(format!(
                        "no γ-equivariant solution of the homological equation in degree {degree}"
                    )));
                }
                (Jet::zero(d, order), h)
            }
        };
        if negligible(&h, tol) {
            continue;
        }
        let phi = id.sub(&h)?;
        let phi_inv = invert(&phi, order)?;
        current = compose(&phi, &compose(&current, &phi_inv, order)?, order)?;
        // pin degree `degree` to the projected resonant part
        current = current.part_below(degree).add(&s)?.add(&current.sub(&current.part_below(degree + 1))?)?;
        phi_acc = compose(&phi, &phi_acc, order)?;
    }

    let conjugacy = match &pre {
        Some(p) => {
            let p_inv = linalg::inverse(p, tol).ok_or(AlgebraError::SingularLinearPart)?;
            compose(&phi_acc, &Jet::from_linear(&p_inv, order), order)?
        }
        None => phi_acc,
    };
    let residual = compose(&conjugacy, &f, order)?.sub(&compose(&current, &conjugacy, order)?)?;
    let group_residual = check_commutes(&current, group, k)?;
    Ok(NormalFormResult {
        residual_norm: residual.max_modulus(),
        group_residual_norm: group_residual.max_modulus(),
        normal_form: current,
        conjugacy,
        pre_normalization: pre,
        treatment,
        residual,
        group: group.clone(),
        k_twist: k,
        resonance: report,
    })
}

/// Drops the off-diagonal linear entries, which are zero in exact mode and
/// roundoff in floating mode after a triangular diagonalization.
fn clear_off_diagonal<S: Scalar>(f: &Jet<S>) -> Jet<S> {
    f.map_coeffs(|k, n, c| {
        if n.degree() == 1 && n.exponents()[k] != 1 {
            S::zero()
        } else {
            c.clone()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::multi_index::MultiIndex;
    use crate::scalar::{Cyclotomic, Float};

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(n, d)
    }

    fn jet(order: u32, terms: &[(usize, [u32; 2], Cyclotomic)]) -> Jet<Cyclotomic> {
        Jet::from_terms(2, order, terms.iter().map(|(k, e, c)| (*k, e.to_vec(), c.clone()))).unwrap()
    }

    #[test]
    fn linear_diagonal_is_fixed() {
        let f = jet(5, &[(0, [1, 0], q(1, 2)), (1, [0, 1], q(1, 3))]);
        let r = poincare_dulac(&f, &DiagonalGroup::trivial(2), 1, 5, 0.0).unwrap();
        assert_eq!(r.normal_form, f);
        assert_eq!(r.conjugacy, Jet::identity(2, 5));
        assert!(r.residual.is_zero());
    }

    #[test]
    fn removes_zw_keeps_z_squared() {
        let alpha = q(1, 2);
        let f = jet(
            2,
            &[(0, [1, 0], alpha.clone()), (1, [0, 1], alpha.pow(2)), (1, [2, 0], q(1, 1)), (1, [1, 1], q(1, 1))],
        );
        let r = poincare_dulac(&f, &DiagonalGroup::trivial(2), 1, 2, 0.0).unwrap();
        let expected = jet(2, &[(0, [1, 0], alpha.clone()), (1, [0, 1], alpha.pow(2)), (1, [2, 0], q(1, 1))]);
        assert_eq!(r.normal_form, expected);
        assert!(r.residual.is_zero());
        // Same map at higher order: z² survives, everything else is removed.
        let f8 = f.with_order(8);
        let r = poincare_dulac(&f8, &DiagonalGroup::trivial(2), 1, 8, 0.0).unwrap();
        assert!(r.residual.is_zero());
        let support: Vec<_> = r.normal_form.nonlinear_part().terms().map(|(k, n, _)| (k, n.clone())).collect();
        assert_eq!(support, vec![(1, MultiIndex::new(vec![2, 0]))]);
    }

    #[test]
    fn non_resonant_spectrum_linearizes() {
        let f = jet(
            6,
            &[(0, [1, 0], q(1, 3)), (1, [0, 1], q(1, 5)), (0, [0, 2], q(2, 1)), (1, [3, 1], q(-1, 7))],
        );
        let r = poincare_dulac(&f, &DiagonalGroup::trivial(2), 1, 6, 0.0).unwrap();
        assert!(r.is_linear(0.0));
        assert!(r.residual.is_zero());
    }

    #[test]
    fn equivariant_input_stays_equivariant() {
        let (m, u) = (5u32, 3u32);
        let alpha = q(1, 2);
        let g = DiagonalGroup::cyclic_quotient(m, u as i64).unwrap();
        // terms allowed by the lattice q·n ≡ q_k mod 5
        let f = jet(
            8,
            &[
                (0, [1, 0], alpha.clone()),
                (1, [0, 1], alpha.pow(u)),
                (1, [u, 0], q(1, 1)),
                (0, [6, 0], q(3, 1)),
                (1, [5, 1], q(2, 7)),
                (0, [2, 3], q(1, 9)),
            ],
        );
        let r = poincare_dulac(&f, &g, 1, 8, 0.0).unwrap();
        assert!(r.residual.is_zero());
        assert_eq!(r.group_residual_norm, 0.0);
        for (k, n, _) in r.normal_form.nonlinear_part().terms() {
            assert!(r.resonance.as_ref().unwrap().is_resonant(k, n));
        }
    }

    #[test]
    fn triangular_linear_part_is_diagonalized() {
        let f = jet(5, &[(0, [1, 0], q(1, 2)), (1, [1, 0], q(3, 1)), (1, [0, 1], q(1, 3)), (0, [1, 1], q(1, 1))]);
        let r = poincare_dulac(&f, &DiagonalGroup::trivial(2), 1, 5, 0.0).unwrap();
        assert_eq!(r.treatment, LinearTreatment::Triangularized);
        assert!(r.residual.is_zero());
        assert!(linalg::is_diagonal(&r.normal_form.linear_part(), 0.0));
        let p = r.pre_normalization.clone().unwrap();
        let lin = compose(&r.conjugacy, &Jet::from_linear(&p, 5), 5).unwrap().linear_part();
        assert_eq!(lin, linalg::identity::<Cyclotomic>(2));
    }

    #[test]
    fn anti_diagonal_twisted_case_is_linear() {
        // (βw, αz) over (ζz, ζ^3 w), m = 8, k = 3
        let g = DiagonalGroup::cyclic_quotient(8, 3).unwrap();
        let mut f = jet(6, &[(0, [0, 1], q(1, 3)), (1, [1, 0], q(1, 5))]);
        // add twisted-equivariant terms: coordinate 0 needs q·n ≡ 3, coordinate 1 needs q·n ≡ 9 ≡ 1
        f.set_coeff(0, &MultiIndex::new(vec![3, 0]), q(1, 1)).unwrap();
        f.set_coeff(1, &MultiIndex::new(vec![0, 3]), q(2, 1)).unwrap();
        assert!(check_commutes(&f, &g, 3).unwrap().is_zero());
        let r = poincare_dulac(&f, &g, 3, 6, 0.0).unwrap();
        assert_eq!(r.treatment, LinearTreatment::LinearSolve);
        assert!(r.is_linear(0.0));
        assert!(r.residual.is_zero());
        assert_eq!(r.group_residual_norm, 0.0);
    }

    #[test]
    fn rejections() {
        let g = DiagonalGroup::cyclic_quotient(5, 2).unwrap();
        let f = jet(3, &[(0, [1, 0], q(1, 2)), (1, [0, 1], q(1, 3)), (0, [2, 0], q(1, 1))]);
        assert!(matches!(poincare_dulac(&f, &g, 1, 3, 0.0), Err(NormalFormError::NonCommuting { .. })));
        let big = jet(3, &[(0, [1, 0], q(2, 1)), (1, [0, 1], q(1, 3))]);
        assert!(matches!(
            poincare_dulac(&big, &DiagonalGroup::trivial(2), 1, 3, 0.0),
            Err(NormalFormError::NonAttracting { .. })
        ));
        // non-triangular linear part with the resonant spectrum (1/2, 1/4)
        let mixed = jet(3, &[(0, [1, 0], q(3, 8)), (0, [0, 1], q(1, 8)), (1, [1, 0], q(1, 8)), (1, [0, 1], q(3, 8)), (0, [2, 0], q(1, 1))]);
        assert!(matches!(
            poincare_dulac(&mixed, &DiagonalGroup::trivial(2), 1, 3, 0.0),
            Err(NormalFormError::Unsupported(_))
        ));
        assert!(matches!(
            poincare_dulac(&f, &DiagonalGroup::cyclic_quotient(6, 1).unwrap(), 2, 3, 0.0),
            Err(NormalFormError::Gcd(_))
        ));
    }

    #[test]
    fn jordan_block_without_resonance_linearizes() {
        // (αz, αw + z): equal eigenvalues, no resonance in degree ≥ 2
        let jordan = jet(5, &[(0, [1, 0], q(1, 2)), (1, [0, 1], q(1, 2)), (1, [1, 0], q(1, 1)), (0, [2, 0], q(1, 1)), (1, [1, 2], q(3, 1))]);
        let r = poincare_dulac(&jordan, &DiagonalGroup::trivial(2), 1, 5, 0.0).unwrap();
        assert_eq!(r.treatment, LinearTreatment::LinearSolve);
        assert!(r.is_linear(0.0));
        assert!(r.residual.is_zero());
    }

    #[test]
    fn float_mode_small_residual() {
        let f: Jet<Float> = Jet::from_terms(
            2,
            6,
            vec![
                (0, vec![1, 0], Float::new(0.5, 0.0)),
                (1, vec![0, 1], Float::new(0.25, 0.0)),
                (1, vec![2, 0], Float::new(1.0, 0.0)),
                (0, vec![1, 1], Float::new(0.3, -0.2)),
                (1, vec![0, 3], Float::new(-1.5, 0.0)),
            ],
        )
        .unwrap();
        let r = poincare_dulac(&f, &DiagonalGroup::trivial(2), 1, 6, 1e-10).unwrap();
        assert!(r.residual_norm < 1e-9, "{}", r.residual_norm);
        let z2 = r.normal_form.coeff(1, &MultiIndex::new(vec![2, 0]));
        assert!((z2.0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn spectral_radius_estimate() {
        let a = vec![vec![q(0, 1), q(1, 3)], vec![q(1, 12), q(0, 1)]];
        assert!((spectral_radius(&a) - 1.0 / 6.0).abs() < 1e-6);
        let j = vec![vec![q(1, 2), q(0, 1)], vec![q(5, 1), q(1, 2)]];
        assert!((spectral_radius(&j) - 0.5).abs() < 1e-6);
    }
}
