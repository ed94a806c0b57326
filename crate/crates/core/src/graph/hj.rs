//! Hirzebruch-Jung continued fractions `m/q = b_1 − 1/(b_2 − 1/(… − 1/b_n))`,
//! `b_i ≥ 2`, and the cyclic quotient singularities they resolve.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::document::DualGraph;

/// `C²/Z_m` with `ζ` acting by `(ζz, ζ^q w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicQuotientData {
    pub m: i64,
    pub q: i64,
}

impl CyclicQuotientData {
    /// Requires `m ≥ 1` and `gcd(m, q) = 1`; `q` is reduced to `1 ≤ q < m`
    /// (`q = 1` when `m = 1`).
    pub fn new(m: i64, q: i64) -> Result<Self, GraphError> {
        if m < 1 {
            return Err(GraphError::CyclicQuotient(format!("m = {m} must be ≥ 1")));
        }
        if m == 1 {
            return Ok(CyclicQuotientData { m: 1, q: 1 });
        }
        let q = q.rem_euclid(m);
        if q.gcd(&m) != 1 {
            return Err(GraphError::CyclicQuotient(format!("gcd({m}, {q}) ≠ 1")));
        }
        Ok(CyclicQuotientData { m, q })
    }

    /// `m = 1`: the quotient is smooth and the chain is empty.
    pub fn is_smooth(&self) -> bool {
        self.m == 1
    }

    /// The data of the reversed chain, `(m, q')` with `q q' ≡ 1 mod m`.
    pub fn dual(&self) -> Self {
        CyclicQuotientData { m: self.m, q: dual_q(self.m, self.q) }
    }

    /// `min(q, q')`: independent of the direction in which the chain is read.
    pub fn canonical(&self) -> Self {
        CyclicQuotientData { m: self.m, q: self.q.min(self.dual().q) }
    }
}

/// `q⁻¹ mod m` in `1..m` (`1` for `m = 1`).
pub fn dual_q(m: i64, q: i64) -> i64 {
    if m == 1 {
        return 1;
    }
    let e = q.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

/// `b = ⌈m/q⌉`, recurse on `(q, b·q − m)`. Empty for the smooth point.
pub fn hj_expand(c: CyclicQuotientData) -> Vec<i64> {
    let mut out = Vec::new();
    let (mut m, mut q) = (c.m, c.q);
    if m == 1 {
        return out;
    }
    while q > 0 {
        let b = Integer::div_ceil(&m, &q);
        out.push(b);
        (m, q) = (q, b * q - m);
    }
    out
}

/// Evaluates the continued fraction; the empty chain folds to `(1, 1)`.
pub fn hj_fold(b: &[i64]) -> Result<CyclicQuotientData, GraphError> {
    if let Some(&bad) = b.iter().find(|&&x| x < 2) {
        return Err(GraphError::ContinuedFraction(bad));
    }
    let Some((&last, rest)) = b.split_last() else {
        return Ok(CyclicQuotientData { m: 1, q: 1 });
    };
    // x = num/den, folded from the end: x ← b_i − 1/x
    let (mut num, mut den) = (last, 1i64);
    for &bi in rest.iter().rev() {
        let next = bi
            .checked_mul(num)
            .and_then(|v| v.checked_sub(den))
            .ok_or_else(|| GraphError::CyclicQuotient("continued fraction overflows i64".into()))?;
        (num, den) = (next, num);
    }
    CyclicQuotientData::new(num, den)
}

/// The resolution chain of `c`: rational curves with self-intersections `−b_i`.
pub fn resolution_chain(c: CyclicQuotientData) -> DualGraph {
    let selfs: Vec<i64> = hj_expand(c).into_iter().map(|b| -b).collect();
    DualGraph::chain(&selfs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cq(m: i64, q: i64) -> CyclicQuotientData {
        CyclicQuotientData::new(m, q).unwrap()
    }

    #[test]
    fn expansions() {
        assert_eq!(hj_expand(cq(2, 1)), vec![2]);
        assert_eq!(hj_expand(cq(5, 2)), vec![3, 2]);
        assert_eq!(hj_expand(cq(3, 2)), vec![2, 2]);
        assert_eq!(hj_expand(cq(7, 1)), vec![7]);
        assert!(hj_expand(cq(1, 1)).is_empty());
    }

    #[test]
    fn folds() {
        assert_eq!(hj_fold(&[2]).unwrap(), cq(2, 1));
        assert_eq!(hj_fold(&[3, 2]).unwrap(), cq(5, 2));
        assert_eq!(hj_fold(&[2, 2, 2]).unwrap(), cq(4, 3));
        assert_eq!(hj_fold(&[]).unwrap(), cq(1, 1));
        assert_eq!(hj_fold(&[3, 1]), Err(GraphError::ContinuedFraction(1)));
    }

    #[test]
    fn reversal_is_the_dual() {
        for m in 2..40 {
            for q in 1..m {
                if q.gcd(&m) != 1 {
                    continue;
                }
                let c = cq(m, q);
                let mut rev = hj_expand(c);
                rev.reverse();
                assert_eq!(hj_fold(&rev).unwrap(), c.dual());
                assert_eq!(c.dual().dual(), c);
            }
        }
    }

    #[test]
    fn data_validation() {
        assert!(CyclicQuotientData::new(6, 3).is_err());
        assert!(CyclicQuotientData::new(0, 1).is_err());
        assert_eq!(cq(7, 10), cq(7, 3));
        assert_eq!(cq(7, 3).canonical(), cq(7, 3));
        assert_eq!(cq(7, 5).canonical(), cq(7, 3));
    }
}
