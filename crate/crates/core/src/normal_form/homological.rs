//! The homological equation `G = S + H∘A − A∘H` on one homogeneous degree.

use crate::algebra::jet::{compose, Jet};
use crate::algebra::linalg::{self, Matrix};
use crate::error::NormalFormError;
use crate::normal_form::resonance::{monomial_values, ResonanceReport};
use crate::scalar::Scalar;

/// `S` keeps the resonant terms of `G`, `H` removes the rest.
#[derive(Clone, Debug)]
pub struct HomologicalSplit<S> {
    pub resonant: Jet<S>,
    pub transform: Jet<S>,
}

/// Diagonal case: `H_{k,n} = G_{k,n} / (λ^n − λ_k)` off the resonance set.
///
/// `g` may hold several degrees; each monomial is treated independently.
pub fn homological_split<S: Scalar>(
    g: &Jet<S>,
    report: &ResonanceReport<S>,
    tol: f64,
) -> Result<HomologicalSplit<S>, NormalFormError> {
    let lambda = &report.eigenvalues;
    if lambda.len() != g.dim() {
        return Err(NormalFormError::Algebra(crate::error::AlgebraError::DimensionMismatch {
            left: g.dim(),
            right: lambda.len(),
        }));
    }
    let basis = g.basis().clone();
    let values = monomial_values(&basis, lambda);
    let mut resonant = Jet::zero(g.dim(), g.order());
    let mut transform = Jet::zero(g.dim(), g.order());
    for (k, n, c) in g.terms() {
        if n.degree() > report.order || report.is_resonant(k, n) {
            if n.degree() > report.order {
                return Err(NormalFormError::Unsupported(format!(
                    "resonance report stops at degree {} but the jet has degree {}",
                    report.order,
                    n.degree()
                )));
            }
            resonant.set_coeff(k, n, c.clone())?;
            continue;
        }
        let idx = basis.index_of(n).expect("term of the basis");
        let denom = values[idx].sub(&lambda[k]);
        let vanishes = if S::EXACT { denom.is_zero() } else { denom.is_negligible(tol) };
        if vanishes {
            return Err(NormalFormError::InconsistentResonance {
                coordinate: k,
                monomial: n.exponents().to_vec(),
            });
        }
        let h = c.div(&denom).expect("nonzero denominator");
        transform.set_coeff(k, n, h)?;
    }
    Ok(HomologicalSplit { resonant, transform })
}

/// `H∘A − A∘H` for a homogeneous `H` of degree `degree` and linear `A`.
pub fn homological_operator<S: Scalar>(h: &Jet<S>, a: &Matrix<S>) -> Result<Jet<S>, NormalFormError> {
    let lin = Jet::from_linear(a, h.order());
    let ha = compose(h, &lin, h.order())?;
    Ok(ha.sub(&h.left_linear(a))?)
}

/// General linear part: solves `H∘A − A∘H = G` on degree `degree` by exact
/// (or pivoted floating) elimination. A singular operator means a resonance,
/// which this path does not handle.
pub fn solve_homological<S: Scalar>(
    g: &Jet<S>,
    a: &Matrix<S>,
    degree: u32,
    tol: f64,
) -> Result<Jet<S>, NormalFormError> {
    let d = g.dim();
    let basis = g.basis().clone();
    let range = basis.degree_range(degree);
    let width = range.len();
    let unknowns = d * width;
    let mut columns: Vec<Vec<S>> = Vec::with_capacity(unknowns);
    for k in 0..d {
        for idx in range.clone() {
            let mut e = Jet::zero(d, g.order());
            e.set_coeff(k, basis.monomial(idx), S::one())?;
            let image = homological_operator(&e, a)?;
            let mut col = Vec::with_capacity(unknowns);
            for j in 0..d {
                for i in range.clone() {
                    col.push(image.coordinate(j)[i].clone());
                }
            }
            columns.push(col);
        }
    }
    let matrix: Matrix<S> = (0..unknowns)
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let rhs: Matrix<S> = (0..d)
        .flat_map(|j| range.clone().map(move |i| (j, i)))
        .map(|(j, i)| vec![g.coordinate(j)[i].clone()])
        .collect();
    let sol = linalg::solve(&matrix, &rhs, tol).ok_or_else(|| {
        NormalFormError::Unsupported(format!(
            "homological operator is singular in degree {degree} for a non-diagonal linear part (resonant Jordan case)"
        ))
    })?;
    let mut h = Jet::zero(d, g.order());
    for k in 0..d {
        for (off, idx) in range.clone().enumerate() {
            let v = sol[k * width + off][0].clone();
            if !v.is_zero() {
                h.set_coeff(k, basis.monomial(idx), v)?;
            }
        }
    }
    Ok(h)
}
