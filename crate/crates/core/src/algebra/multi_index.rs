use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

/// Exponent vector `n` of the monomial `x^n = x_1^{n_1} ⋯ x_d^{n_d}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        assert!(!exponents.is_empty(), "multi-index of dimension 0");
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    /// The exponent vector of `x_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::new(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `q·n` for a weight vector `q`.
    pub fn weighted_sum(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All monomials in `dim` variables of degree `0..=order`, in graded
/// lexicographic order (by degree, then lexicographically decreasing).
#[derive(Debug)]
pub struct MonomialBasis {
    dim: usize,
    order: u32,
    monomials: Vec<MultiIndex>,
    degrees: Vec<u32>,
    degree_start: Vec<usize>,
    lookup: HashMap<MultiIndex, usize>,
    product: Option<Vec<u32>>,
}

const NO_INDEX: u32 = u32::MAX;
const TABLE_LIMIT: usize = 1200;

fn monomials_of_degree(dim: usize, degree: u32, out: &mut Vec<MultiIndex>) {
    fn rec(prefix: &mut Vec<u32>, dim: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == dim {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, dim, remaining - e, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(dim), dim, degree, out);
}

impl MonomialBasis {
    fn build(dim: usize, order: u32) -> Self {
        let mut monomials = Vec::new();
        let mut degree_start = Vec::with_capacity(order as usize + 2);
        for deg in 0..=order {
            degree_start.push(monomials.len());
            monomials_of_degree(dim, deg, &mut monomials);
        }
        degree_start.push(monomials.len());
        let degrees = monomials.iter().map(MultiIndex::degree).collect();
        let lookup = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect::<HashMap<_, _>>();
        let product = (monomials.len() <= TABLE_LIMIT).then(|| {
            let n = monomials.len();
            let mut table = vec![NO_INDEX; n * n];
            for i in 0..n {
                for j in 0..n {
                    if let Some(&k) = lookup.get(&monomials[i].plus(&monomials[j])) {
                        table[i * n + j] = k as u32;
                    }
                }
            }
            table
        });
        MonomialBasis {
            dim,
            order,
            monomials,
            degrees,
            degree_start,
            lookup,
            product,
        }
    }

    /// Shared basis for `(dim, order)`.
    pub fn get(dim: usize, order: u32) -> Arc<MonomialBasis> {
        static CACHE: OnceLock<RwLock<HashMap<(usize, u32), Arc<MonomialBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(b) = cache.read().expect("basis cache poisoned").get(&(dim, order)) {
            return b.clone();
        }
        let basis = Arc::new(MonomialBasis::build(dim, order));
        cache
            .write()
            .expect("basis cache poisoned")
            .entry((dim, order))
            .or_insert(basis)
            .clone()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomial(&self, idx: usize) -> &MultiIndex {
        &self.monomials[idx]
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        self.degrees[idx]
    }

    pub fn index_of(&self, m: &MultiIndex) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    /// Index range of the monomials of exactly `degree`.
    pub fn degree_range(&self, degree: u32) -> std::ops::Range<usize> {
        if degree > self.order {
            return self.len()..self.len();
        }
        self.degree_start[degree as usize]..self.degree_start[degree as usize + 1]
    }

    /// Index of the product monomial, `None` when its degree exceeds the order.
    #[inline]
    pub fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        match &self.product {
            Some(t) => {
                let k = t[i * self.len() + j];
                (k != NO_INDEX).then_some(k as usize)
            }
            None => self.index_of(&self.monomials[i].plus(&self.monomials[j])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order_in_two_variables() {
        let b = MonomialBasis::get(2, 2);
        let listed: Vec<Vec<u32>> = b.monomials().iter().map(|m| m.exponents().to_vec()).collect();
        assert_eq!(
            listed,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        assert_eq!(b.degree_range(2), 3..6);
    }

    #[test]
    fn basis_sizes_match_binomials() {
        // C(N + d, d) monomials of degree ≤ N
        assert_eq!(MonomialBasis::get(2, 12).len(), 91);
        assert_eq!(MonomialBasis::get(3, 12).len(), 455);
        assert_eq!(MonomialBasis::get(1, 5).len(), 6);
    }

    #[test]
    fn product_index_with_and_without_table() {
        let small = MonomialBasis::get(3, 4);
        let big = MonomialBasis::get(3, 20);
        assert!(small.product.is_some() && big.product.is_none());
        for basis in [small, big] {
            let a = basis.index_of(&MultiIndex::new(vec![1, 0, 1])).unwrap();
            let b = basis.index_of(&MultiIndex::new(vec![0, 2, 0])).unwrap();
            let ab = basis.product_index(a, b).unwrap();
            assert_eq!(basis.monomial(ab).exponents(), &[1, 2, 1]);
        }
    }
}
