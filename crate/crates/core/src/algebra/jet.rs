//! Truncated polynomial self-maps of `C^d` fixing the origin.

use std::sync::Arc;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::multi_index::{MonomialBasis, MultiIndex};
use crate::error::AlgebraError;
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// A germ known up to and including total degree `order`.
///
/// Each coordinate is stored densely over the shared [`MonomialBasis`]; the
/// constant slot is always zero.
#[derive(Clone, Debug)]
pub struct Jet<S> {
    basis: Arc<MonomialBasis>,
    coords: Vec<Vec<S>>,
}

impl<S: Scalar> PartialEq for Jet<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.order() == other.order() && self.coords == other.coords
    }
}

/// Truncated product of two polynomials over the same basis.
pub(crate) fn mul_truncated<S: Scalar>(basis: &MonomialBasis, a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); basis.len()];
    let a_nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i].is_zero()).collect();
    let b_nz: Vec<usize> = (0..b.len()).filter(|&i| !b[i].is_zero()).collect();
    let order = basis.order();
    for &i in &a_nz {
        let di = basis.degree_of(i);
        for &j in &b_nz {
            if di + basis.degree_of(j) > order {
                break;
            }
            let k = basis.product_index(i, j).expect("degree checked");
            out[k].add_mul_assign(&a[i], &b[j]);
        }
    }
    out
}

/// Lazily computed monomials `g^n` of a map `g`.
struct PowerCache<'a, S> {
    basis: &'a MonomialBasis,
    g: &'a [Vec<S>],
    cache: Vec<Option<Vec<S>>>,
}

impl<'a, S: Scalar> PowerCache<'a, S> {
    fn new(basis: &'a MonomialBasis, g: &'a [Vec<S>]) -> Self {
        let mut cache = vec![None; basis.len()];
        let mut one = vec![S::zero(); basis.len()];
        one[0] = S::one();
        cache[0] = Some(one);
        PowerCache { basis, g, cache }
    }

    fn ensure(&mut self, idx: usize) {
        if self.cache[idx].is_some() {
            return;
        }
        let m = self.basis.monomial(idx);
        let i = m.exponents().iter().position(|&e| e > 0).expect("idx 0 is cached");
        let mut prev = m.exponents().to_vec();
        prev[i] -= 1;
        let prev_idx = self
            .basis
            .index_of(&MultiIndex::new(prev))
            .expect("lower monomial is in basis");
        self.ensure(prev_idx);
        let p = mul_truncated(
            self.basis,
            self.cache[prev_idx].as_ref().expect("ensured"),
            &self.g[i],
        );
        self.cache[idx] = Some(p);
    }

    fn get(&mut self, idx: usize) -> &[S] {
        self.ensure(idx);
        self.cache[idx].as_ref().expect("ensured")
    }
}

impl<S: Scalar> Jet<S> {
    pub fn zero(dim: usize, order: u32) -> Self {
        assert!(dim >= 1 && order >= 1, "jet needs dim ≥ 1 and order ≥ 1");
        let basis = MonomialBasis::get(dim, order);
        let coords = vec![vec![S::zero(); basis.len()]; dim];
        Jet { basis, coords }
    }

    pub fn identity(dim: usize, order: u32) -> Self {
        Self::from_linear(&linalg::identity(dim), order)
    }

    /// The linear map `x ↦ M x` as a jet.
    pub fn from_linear(m: &Matrix<S>, order: u32) -> Self {
        let dim = m.len();
        let mut jet = Self::zero(dim, order);
        for k in 0..dim {
            for i in 0..dim {
                let idx = jet.basis.index_of(&MultiIndex::unit(dim, i)).expect("degree 1");
                jet.coords[k][idx] = m[k][i].clone();
            }
        }
        jet
    }

    /// Builds a jet from `(coordinate, exponents, coefficient)` triples.
    /// Repeated monomials add up; terms above `order` are truncated away.
    pub fn from_terms<I>(dim: usize, order: u32, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (usize, Vec<u32>, S)>,
    {
        if dim == 0 || order == 0 {
            return Err(AlgebraError::InvalidJet("dimension and order must be ≥ 1".into()));
        }
        let mut jet = Self::zero(dim, order);
        for (k, exps, c) in terms {
            if k >= dim {
                return Err(AlgebraError::InvalidJet(format!("coordinate {k} out of range")));
            }
            if exps.len() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    left: dim,
                    right: exps.len(),
                });
            }
            let m = MultiIndex::new(exps);
            if m.degree() == 0 {
                if c.is_zero() {
                    continue;
                }
                return Err(AlgebraError::NonzeroConstant(k));
            }
            if m.degree() > order {
                continue;
            }
            let idx = jet.basis.index_of(&m).expect("degree within order");
            jet.coords[k][idx] = jet.coords[k][idx].add(&c);
        }
        Ok(jet)
    }

    pub(crate) fn from_raw(basis: Arc<MonomialBasis>, coords: Vec<Vec<S>>) -> Self {
        debug_assert!(coords.iter().all(|c| c.len() == basis.len() && c[0].is_zero()));
        Jet { basis, coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn order(&self) -> u32 {
        self.basis.order()
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn coordinate(&self, k: usize) -> &[S] {
        &self.coords[k]
    }

    pub fn coeff(&self, k: usize, m: &MultiIndex) -> S {
        self.basis
            .index_of(m)
            .map(|idx| self.coords[k][idx].clone())
            .unwrap_or_else(S::zero)
    }

    pub fn set_coeff(&mut self, k: usize, m: &MultiIndex, value: S) -> Result<(), AlgebraError> {
        if m.degree() == 0 && !value.is_zero() {
            return Err(AlgebraError::NonzeroConstant(k));
        }
        let idx = self.basis.index_of(m).ok_or(AlgebraError::OrderUnderflow {
            have: self.order(),
            need: m.degree(),
        })?;
        self.coords[k][idx] = value;
        Ok(())
    }

    /// Nonzero terms as `(coordinate, monomial, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &MultiIndex, &S)> + '_ {
        self.coords.iter().enumerate().flat_map(move |(k, c)| {
            c.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(move |(idx, x)| (k, self.basis.monomial(idx), x))
        })
    }

    /// `df(0)`: entry `[k][i]` is the coefficient of `x_i` in coordinate `k`.
    pub fn linear_part(&self) -> Matrix<S> {
        let d = self.dim();
        (0..d)
            .map(|k| {
                (0..d)
                    .map(|i| self.coeff(k, &MultiIndex::unit(d, i)))
                    .collect()
            })
            .collect()
    }

    fn filter_degrees(&self, keep: impl Fn(u32) -> bool) -> Self {
        let coords = self
            .coords
            .iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .map(|(idx, x)| if keep(self.basis.degree_of(idx)) { x.clone() } else { S::zero() })
                    .collect()
            })
            .collect();
        Jet::from_raw(self.basis.clone(), coords)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        self.filter_degrees(|d| d == degree)
    }

    /// Terms of degree strictly below `degree`.
    pub fn part_below(&self, degree: u32) -> Self {
        self.filter_degrees(|d| d < degree)
    }

    /// Terms of degree ≥ 2.
    pub fn nonlinear_part(&self) -> Self {
        self.filter_degrees(|d| d >= 2)
    }

    /// Re-expresses the jet at another order. Raising the order pads with
    /// zeros, which is only meaningful for maps that are genuinely polynomial.
    pub fn with_order(&self, order: u32) -> Self {
        if order == self.order() {
            return self.clone();
        }
        let basis = MonomialBasis::get(self.dim(), order);
        let coords = self
            .coords
            .iter()
            .map(|c| {
                (0..basis.len())
                    .map(|idx| {
                        self.basis
                            .index_of(basis.monomial(idx))
                            .map(|j| c[j].clone())
                            .unwrap_or_else(S::zero)
                    })
                    .collect()
            })
            .collect();
        Jet::from_raw(basis, coords)
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self, AlgebraError> {
        if self.dim() != other.dim() {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let (a, b) = match self.order().cmp(&other.order()) {
            std::cmp::Ordering::Equal => (self.clone(), other.clone()),
            std::cmp::Ordering::Less => (self.clone(), other.with_order(self.order())),
            std::cmp::Ordering::Greater => (self.with_order(other.order()), other.clone()),
        };
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.iter().zip(y).map(|(p, q)| f(p, q)).collect())
            .collect();
        Ok(Jet::from_raw(a.basis, coords))
    }

    /// Coefficient-wise sum, truncated to the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, S::add)
    }

    /// Coefficient-wise difference, truncated to the smaller order.
    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, S::sub)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_coeffs(|_, _, x| x.mul(c))
    }

    /// Applies `f(coordinate, monomial, coefficient)` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(usize, &MultiIndex, &S) -> S) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(k, c)| {
                c.iter()
                    .enumerate()
                    .map(|(idx, x)| {
                        if x.is_zero() {
                            S::zero()
                        } else {
                            f(k, self.basis.monomial(idx), x)
                        }
                    })
                    .collect()
            })
            .collect();
        Jet::from_raw(self.basis.clone(), coords)
    }

    /// Applies the matrix on the left: `x ↦ M · self(x)`.
    pub fn left_linear(&self, m: &Matrix<S>) -> Self {
        let d = self.dim();
        let coords = (0..d)
            .map(|k| {
                let mut out = vec![S::zero(); self.basis.len()];
                for i in 0..d {
                    if m[k][i].is_zero() {
                        continue;
                    }
                    for (o, x) in out.iter_mut().zip(&self.coords[i]) {
                        if !x.is_zero() {
                            o.add_mul_assign(&m[k][i], x);
                        }
                    }
                }
                out
            })
            .collect();
        Jet::from_raw(self.basis.clone(), coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.iter().all(S::is_zero))
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.iter().all(|x| x.is_negligible(tol)))
    }

    /// Largest coefficient modulus; the residual norm used in reports.
    pub fn max_modulus(&self) -> f64 {
        self.coords
            .iter()
            .flat_map(|c| c.iter())
            .map(S::modulus)
            .fold(0.0, f64::max)
    }

    /// `p ∘ self` for a polynomial `p` given over a basis of the same dimension.
    pub fn substitute_into(&self, p: &[S], p_basis: &MonomialBasis) -> Vec<S> {
        self.substitute_many(&[p], p_basis).pop().expect("one polynomial")
    }

    /// Substitutes `self` into several polynomials, sharing the power table.
    fn substitute_many(&self, polys: &[&[S]], p_basis: &MonomialBasis) -> Vec<Vec<S>> {
        let mut powers = PowerCache::new(&self.basis, &self.coords);
        polys
            .iter()
            .map(|p| {
                let mut out = vec![S::zero(); self.basis.len()];
                for (idx, c) in p.iter().enumerate() {
                    if c.is_zero() || p_basis.degree_of(idx) > self.order() {
                        continue;
                    }
                    let target = self
                        .basis
                        .index_of(p_basis.monomial(idx))
                        .expect("degree within order");
                    let pw = powers.get(target);
                    for (o, x) in out.iter_mut().zip(pw) {
                        if !x.is_zero() {
                            o.add_mul_assign(c, x);
                        }
                    }
                }
                out
            })
            .collect()
    }

    /// `self ∘ g` truncated at `order`.
    pub fn compose(&self, g: &Jet<S>, order: u32) -> Result<Jet<S>, AlgebraError> {
        compose(self, g, order)
    }

    pub fn invert(&self, order: u32) -> Result<Jet<S>, AlgebraError> {
        invert(self, order)
    }
}

/// `f ∘ g` truncated at `order`.
pub fn compose<S: Scalar>(f: &Jet<S>, g: &Jet<S>, order: u32) -> Result<Jet<S>, AlgebraError> {
    if f.dim() != g.dim() {
        return Err(AlgebraError::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    for have in [f.order(), g.order()] {
        if have < order {
            return Err(AlgebraError::OrderUnderflow { have, need: order });
        }
    }
    let g = g.with_order(order);
    let polys: Vec<&[S]> = f.coords.iter().map(Vec::as_slice).collect();
    let coords = g.substitute_many(&polys, &f.basis);
    Ok(Jet::from_raw(g.basis.clone(), coords))
}

/// Formal inverse up to `order`; requires an invertible linear part.
pub fn invert<S: Scalar>(f: &Jet<S>, order: u32) -> Result<Jet<S>, AlgebraError> {
    if f.order() < order {
        return Err(AlgebraError::OrderUnderflow {
            have: f.order(),
            need: order,
        });
    }
    let f = f.with_order(order);
    let a_inv = linalg::inverse(&f.linear_part(), DEFAULT_TOLERANCE * 1e-3)
        .ok_or(AlgebraError::SingularLinearPart)?;
    let nonlinear = f.nonlinear_part();
    let d = f.dim();
    let id = Jet::identity(d, order);
    // g = A^{-1}(x - F(g)) gains at least one correct degree per pass.
    let mut g = Jet::from_linear(&a_inv, order);
    for _ in 1..order {
        let fg = compose(&nonlinear, &g, order)?;
        let next = id.sub(&fg)?.left_linear(&a_inv);
        if next == g {
            break;
        }
        g = next;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cyclotomic, Float};

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(n, d)
    }

    fn jet(order: u32, terms: &[(usize, [u32; 2], Cyclotomic)]) -> Jet<Cyclotomic> {
        Jet::from_terms(2, order, terms.iter().map(|(k, e, c)| (*k, e.to_vec(), c.clone()))).unwrap()
    }

    #[test]
    fn identity_is_neutral() {
        let g = jet(4, &[(0, [1, 0], q(2, 1)), (1, [0, 1], q(3, 1)), (1, [2, 1], q(-5, 7))]);
        let id = Jet::identity(2, 4);
        assert_eq!(compose(&id, &g, 4).unwrap(), g);
        assert_eq!(compose(&g, &id, 4).unwrap(), g);
    }

    #[test]
    fn diagonal_linear_composition() {
        let f = jet(3, &[(0, [1, 0], q(1, 2)), (1, [0, 1], q(1, 3))]);
        let g = jet(3, &[(0, [1, 0], q(5, 1)), (1, [0, 1], q(-2, 7))]);
        let expected = jet(3, &[(0, [1, 0], q(5, 2)), (1, [0, 1], q(-2, 21))]);
        assert_eq!(compose(&f, &g, 3).unwrap(), expected);
    }

    #[test]
    fn hand_expanded_composition() {
        // (z, w + z²) ∘ (2z, 3w) = (2z, 3w + 4z²)
        let f = jet(2, &[(0, [1, 0], q(1, 1)), (1, [0, 1], q(1, 1)), (1, [2, 0], q(1, 1))]);
        let g = jet(2, &[(0, [1, 0], q(2, 1)), (1, [0, 1], q(3, 1))]);
        let expected = jet(2, &[(0, [1, 0], q(2, 1)), (1, [0, 1], q(3, 1)), (1, [2, 0], q(4, 1))]);
        assert_eq!(compose(&f, &g, 2).unwrap(), expected);
    }

    #[test]
    fn composition_errors() {
        let f = jet(2, &[(0, [1, 0], q(1, 1))]);
        let g = jet(3, &[(0, [1, 0], q(1, 1))]);
        assert_eq!(
            compose(&f, &g, 3),
            Err(AlgebraError::OrderUnderflow { have: 2, need: 3 })
        );
        let h = Jet::<Cyclotomic>::identity(3, 3);
        assert!(matches!(compose(&g, &h, 3), Err(AlgebraError::DimensionMismatch { .. })));
        let bad = Jet::from_terms(2, 2, vec![(0, vec![0, 0], q(1, 1))]);
        assert_eq!(bad, Err(AlgebraError::NonzeroConstant(0)));
    }

    #[test]
    fn inverse_cases() {
        let id = Jet::<Cyclotomic>::identity(2, 5);
        assert_eq!(invert(&id, 5).unwrap(), id);
        let diag = jet(3, &[(0, [1, 0], q(2, 1)), (1, [0, 1], q(3, 1))]);
        let expected = jet(3, &[(0, [1, 0], q(1, 2)), (1, [0, 1], q(1, 3))]);
        assert_eq!(invert(&diag, 3).unwrap(), expected);
        // (z + w², w)^{-1} = (z - w², w)
        let f = jet(3, &[(0, [1, 0], q(1, 1)), (0, [0, 2], q(1, 1)), (1, [0, 1], q(1, 1))]);
        let g = jet(3, &[(0, [1, 0], q(1, 1)), (0, [0, 2], q(-1, 1)), (1, [0, 1], q(1, 1))]);
        assert_eq!(invert(&f, 3).unwrap(), g);
        assert_eq!(compose(&f, &g, 3).unwrap(), Jet::identity(2, 3));
        assert_eq!(compose(&g, &f, 3).unwrap(), Jet::identity(2, 3));
        let singular = jet(3, &[(0, [1, 0], q(1, 1)), (1, [1, 0], q(1, 1))]);
        assert_eq!(invert(&singular, 3), Err(AlgebraError::SingularLinearPart));
    }

    #[test]
    fn float_composition_matches_exact() {
        let f = jet(4, &[(0, [1, 0], q(1, 2)), (0, [1, 1], q(3, 1)), (1, [0, 1], q(1, 4)), (1, [3, 0], q(-1, 3))]);
        let g = jet(4, &[(0, [1, 0], q(2, 1)), (0, [0, 2], q(1, 5)), (1, [0, 1], q(-1, 1)), (1, [1, 1], q(7, 1))]);
        let exact = compose(&f, &g, 4).unwrap();
        let to_float = |j: &Jet<Cyclotomic>| -> Jet<Float> {
            Jet::from_terms(
                2,
                j.order(),
                j.terms().map(|(k, m, c)| (k, m.exponents().to_vec(), Float(c.to_complex()))),
            )
            .unwrap()
        };
        let approx = compose(&to_float(&f), &to_float(&g), 4).unwrap();
        let diff = approx.sub(&to_float(&exact)).unwrap();
        assert!(diff.max_modulus() < 1e-12);
    }
}
