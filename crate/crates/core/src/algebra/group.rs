//! Finite cyclic diagonal groups `⟨γ⟩`, `γ = Diag(ζ^{q_1}, …, ζ^{q_d})`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::jet::Jet;
use crate::algebra::multi_index::MultiIndex;
use crate::error::AlgebraError;
use crate::scalar::Scalar;

/// Cyclic group generated by `Diag(ζ^{q_1}, …, ζ^{q_d})`, `ζ` a primitive
/// `order`-th root of unity. Weights are kept reduced mod `order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupDocument", into = "GroupDocument")]
pub struct DiagonalGroup {
    order: u32,
    weights: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct GroupDocument {
    order: u32,
    weights: Vec<i64>,
}

impl TryFrom<GroupDocument> for DiagonalGroup {
    type Error = AlgebraError;

    fn try_from(doc: GroupDocument) -> Result<Self, Self::Error> {
        DiagonalGroup::new(doc.order, doc.weights)
    }
}

impl From<DiagonalGroup> for GroupDocument {
    fn from(g: DiagonalGroup) -> Self {
        GroupDocument {
            order: g.order,
            weights: g.weights,
        }
    }
}

/// Which side the group element acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `f ∘ γ^j`
    Pre,
    /// `γ^j ∘ f`
    Post,
}

impl DiagonalGroup {
    pub fn new(order: u32, weights: Vec<i64>) -> Result<Self, AlgebraError> {
        if order == 0 {
            return Err(AlgebraError::InvalidGroup("order must be ≥ 1".into()));
        }
        if weights.is_empty() {
            return Err(AlgebraError::InvalidGroup("empty weight vector".into()));
        }
        let weights = weights.into_iter().map(|q| q.rem_euclid(order as i64)).collect();
        Ok(DiagonalGroup { order, weights })
    }

    pub fn trivial(dim: usize) -> Self {
        DiagonalGroup {
            order: 1,
            weights: vec![0; dim],
        }
    }

    /// The Hirzebruch-Jung group `(z, w) ↦ (ζ z, ζ^q w)` of order `m`.
    pub fn cyclic_quotient(m: u32, q: i64) -> Result<Self, AlgebraError> {
        Self::new(m, vec![1, q])
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The action is faithful iff `gcd(q_1, …, q_d, p) = 1`.
    pub fn is_effective(&self) -> bool {
        self.weights
            .iter()
            .fold(self.order as i64, |g, &q| g.gcd(&q))
            == 1
    }

    /// `q·n ≡ twist·q_k (mod p)`: the monomial `x^n` may appear in coordinate
    /// `k` of a germ with `f∘γ = γ^twist∘f`.
    pub fn allows_twisted(&self, n: &MultiIndex, k: usize, twist: i64) -> bool {
        let p = self.order as i64;
        (n.weighted_sum(&self.weights) - twist * self.weights[k]).rem_euclid(p) == 0
    }

    fn check_dim(&self, dim: usize) -> Result<(), AlgebraError> {
        if dim != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                left: dim,
                right: self.dim(),
            });
        }
        Ok(())
    }
}

/// `true` iff `x^n` may appear in coordinate `k` of a germ commuting with `γ`.
pub fn equivariance_lattice(group: &DiagonalGroup, n: &MultiIndex, k: usize) -> bool {
    group.allows_twisted(n, k, 1)
}

/// `f ∘ γ^j` (`Side::Pre`) or `γ^j ∘ f` (`Side::Post`).
pub fn apply_group<S: Scalar>(
    f: &Jet<S>,
    group: &DiagonalGroup,
    power: i64,
    side: Side,
) -> Result<Jet<S>, AlgebraError> {
    group.check_dim(f.dim())?;
    let p = group.order();
    let roots: Vec<S> = (0..p as i64).map(|e| S::root_of_unity(p, e)).collect();
    let root = |e: i64| &roots[e.rem_euclid(p as i64) as usize];
    Ok(f.map_coeffs(|k, n, c| match side {
        Side::Pre => c.mul(root(power * n.weighted_sum(group.weights()))),
        Side::Post => c.mul(root(power * group.weights()[k])),
    }))
}

/// `(1/p) Σ_j γ^{-j·rho_out} ∘ h ∘ γ^{j·rho_in}`, the projection onto maps
/// satisfying `h ∘ γ^{rho_in} = γ^{rho_out} ∘ h`.
pub fn equivariant_average<S: Scalar>(
    h: &Jet<S>,
    group: &DiagonalGroup,
    rho_in: i64,
    rho_out: i64,
) -> Result<Jet<S>, AlgebraError> {
    group.check_dim(h.dim())?;
    let p = group.order() as i64;
    let mut acc = Jet::zero(h.dim(), h.order());
    for j in 0..p {
        let inner = apply_group(h, group, j * rho_in, Side::Pre)?;
        let outer = apply_group(&inner, group, -j * rho_out, Side::Post)?;
        acc = acc.add(&outer)?;
    }
    let inv_p = S::from_int(p).inv().expect("p ≥ 1");
    Ok(acc.scale(&inv_p))
}

/// `f∘γ − γ^k∘f`, coefficient-wise.
pub fn check_commutes<S: Scalar>(
    f: &Jet<S>,
    group: &DiagonalGroup,
    k: i64,
) -> Result<Jet<S>, AlgebraError> {
    let pre = apply_group(f, group, 1, Side::Pre)?;
    let post = apply_group(f, group, k, Side::Post)?;
    pre.sub(&post)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(n, d)
    }

    fn jet(order: u32, terms: &[(usize, [u32; 2], Cyclotomic)]) -> Jet<Cyclotomic> {
        Jet::from_terms(2, order, terms.iter().map(|(k, e, c)| (*k, e.to_vec(), c.clone()))).unwrap()
    }

    #[test]
    fn power_zero_and_full_period_are_identity() {
        let g = DiagonalGroup::new(5, vec![1, 3]).unwrap();
        let f = jet(3, &[(0, [1, 0], q(1, 2)), (0, [1, 2], q(2, 1)), (1, [2, 1], q(-1, 3))]);
        for side in [Side::Pre, Side::Post] {
            assert_eq!(apply_group(&f, &g, 0, side).unwrap(), f);
            assert_eq!(apply_group(&f, &g, 5, side).unwrap(), f);
        }
    }

    #[test]
    fn pre_and_post_scaling() {
        let g = DiagonalGroup::new(3, vec![1, 1]).unwrap();
        let f = jet(2, &[(0, [2, 0], q(1, 1)), (1, [0, 1], q(1, 1))]);
        let pre = apply_group(&f, &g, 1, Side::Pre).unwrap();
        let z2 = MultiIndex::new(vec![2, 0]);
        assert_eq!(pre.coeff(0, &z2), Cyclotomic::root_of_unity(3, 2));

        let g = DiagonalGroup::new(3, vec![1, 2]).unwrap();
        let post = apply_group(&f, &g, 1, Side::Post).unwrap();
        assert_eq!(post.coeff(0, &z2), Cyclotomic::root_of_unity(3, 1));
        assert_eq!(post.coeff(1, &MultiIndex::new(vec![0, 1])), Cyclotomic::root_of_unity(3, 2));
    }

    #[test]
    fn averaging_keeps_even_and_kills_odd_terms() {
        // zw has even weight: it survives against an invariant target and
        // dies against the weight-one target of the commuting action
        let g = DiagonalGroup::new(2, vec![1, 1]).unwrap();
        let h = jet(2, &[(0, [1, 1], q(1, 1))]);
        assert_eq!(equivariant_average(&h, &g, 1, 0).unwrap(), h);
        assert!(equivariant_average(&h, &g, 1, 1).unwrap().is_zero());

        let g = DiagonalGroup::new(2, vec![1, 0]).unwrap();
        let h = jet(1, &[(1, [1, 0], q(1, 1))]);
        assert!(equivariant_average(&h, &g, 1, 1).unwrap().is_zero());
    }

    #[test]
    fn averaging_is_idempotent_and_matches_lattice() {
        let g = DiagonalGroup::new(6, vec![1, 5]).unwrap();
        let mut terms = Vec::new();
        for a in 0..=4u32 {
            for b in 0..=(4 - a) {
                if a + b >= 1 {
                    terms.push((0, vec![a, b], q(a as i64 + 1, b as i64 + 2)));
                    terms.push((1, vec![a, b], q(b as i64 - 2, a as i64 + 1)));
                }
            }
        }
        let h = Jet::from_terms(2, 4, terms).unwrap();
        let avg = equivariant_average(&h, &g, 1, 1).unwrap();
        assert_eq!(equivariant_average(&avg, &g, 1, 1).unwrap(), avg);
        for (k, n, _) in avg.terms() {
            assert!(equivariance_lattice(&g, n, k));
        }
        for (k, n, c) in h.terms() {
            if equivariance_lattice(&g, n, k) {
                assert_eq!(&avg.coeff(k, n), c);
            }
        }
        assert!(check_commutes(&avg, &g, 1).unwrap().is_zero());
    }

    #[test]
    fn lattice_examples() {
        let trivial = DiagonalGroup::trivial(2);
        assert!(equivariance_lattice(&trivial, &MultiIndex::new(vec![3, 1]), 0));
        let g = DiagonalGroup::new(4, vec![1, 3]).unwrap();
        assert!(!equivariance_lattice(&g, &MultiIndex::new(vec![2, 0]), 1));
        for u in 1..8i64 {
            let g = DiagonalGroup::new(5, vec![1, 3]).unwrap();
            let n = MultiIndex::new(vec![u as u32, 0]);
            assert_eq!(equivariance_lattice(&g, &n, 1), u.rem_euclid(5) == 3);
        }
    }

    #[test]
    fn hopf_examples_commute() {
        let (m, u) = (5u32, 3u32);
        let alpha = q(1, 2);
        // (αz, α^u w + z^u) with q ≡ u mod m
        let f = jet(
            4,
            &[(0, [1, 0], alpha.clone()), (1, [0, 1], alpha.pow(u)), (1, [u, 0], q(1, 1))],
        );
        let g = DiagonalGroup::cyclic_quotient(m, u as i64).unwrap();
        assert!(check_commutes(&f, &g, 1).unwrap().is_zero());
        // (βw, αz) with q² ≡ 1 mod m and k = q
        let g = DiagonalGroup::cyclic_quotient(8, 3).unwrap();
        let f = jet(3, &[(0, [0, 1], q(1, 3)), (1, [1, 0], q(1, 5))]);
        assert!(check_commutes(&f, &g, 3).unwrap().is_zero());
        assert!(!check_commutes(&f, &g, 1).unwrap().is_zero());
        // diagonal maps commute with diagonal groups
        let d = jet(3, &[(0, [1, 0], q(1, 3)), (1, [0, 1], q(2, 7))]);
        assert!(check_commutes(&d, &DiagonalGroup::new(7, vec![2, 5]).unwrap(), 1).unwrap().is_zero());
    }

    #[test]
    fn effectiveness_flag() {
        assert!(DiagonalGroup::new(6, vec![2, 3]).unwrap().is_effective());
        assert!(!DiagonalGroup::new(6, vec![2, 4]).unwrap().is_effective());
    }
}
