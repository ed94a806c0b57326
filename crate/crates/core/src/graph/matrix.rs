use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::graph::document::DualGraph;

/// Self-intersections on the diagonal, edge counts off it. Loops do not
/// contribute (the self-intersection already accounts for them).
pub fn intersection_matrix(g: &DualGraph) -> Vec<Vec<i64>> {
    let n = g.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, v) in g.vertices.iter().enumerate() {
        m[i][i] = v.self_intersection;
    }
    for ((i, j), count) in g.multiplicities() {
        if i != j {
            m[i][j] += count as i64;
            m[j][i] += count as i64;
        }
    }
    m
}

/// Leading principal minors of `m` by Gaussian elimination without pivoting
/// over sparse rational rows (`minor_k` is the product of the first `k`
/// pivots). Fill-in stays inside the band, so chains cost `O(n)`. Stops at
/// the first vanishing minor, which is returned last.
pub fn leading_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    let mut rows: Vec<BTreeMap<usize, BigRational>> = m
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(j, &x)| (j, BigRational::from_integer(x.into()))).collect())
        .collect();
    let mut minors = Vec::with_capacity(n);
    let mut product = BigRational::one();
    for k in 0..n {
        let pivot = rows[k].get(&k).cloned().unwrap_or_else(BigRational::zero);
        product *= &pivot;
        minors.push(product.to_integer());
        if pivot.is_zero() {
            break;
        }
        let tail: Vec<(usize, BigRational)> = rows[k].range(k + 1..).map(|(j, x)| (*j, x.clone())).collect();
        for row in rows.iter_mut().skip(k + 1) {
            let Some(factor) = row.remove(&k).map(|x| x / &pivot) else { continue };
            for (j, x) in &tail {
                let e = row.entry(*j).or_insert_with(BigRational::zero);
                *e -= &factor * x;
                if e.is_zero() {
                    row.remove(j);
                }
            }
        }
    }
    minors
}

/// Exact Sylvester test: every leading principal minor of `−M` is positive.
pub fn is_negative_definite(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return false;
    }
    for i in 0..n {
        for j in 0..i {
            if m[i][j] != m[j][i] {
                return false;
            }
        }
    }
    let neg: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let minors = leading_minors(&neg);
    minors.len() == n && minors.iter().all(Signed::is_positive)
}

/// `|det M|`; the order of the discriminant group for a
/// negative definite intersection form.
pub fn abs_determinant(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::from(1);
    }
    let minors = leading_minors(m);
    if minors.len() < m.len() {
        // a vanishing leading minor: fall back to pivoting by row swaps
        return pivoted_determinant(m).abs();
    }
    minors.last().expect("nonempty").abs()
}

fn pivoted_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    prev * sign
}
