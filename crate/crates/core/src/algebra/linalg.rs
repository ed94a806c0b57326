//! Small dense linear algebra over a [`Scalar`] field.

use crate::scalar::Scalar;

/// Row-major square or rectangular matrix.
pub type Matrix<S> = Vec<Vec<S>>;

pub fn identity<S: Scalar>(n: usize) -> Matrix<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

pub fn diagonal<S: Scalar>(entries: &[S]) -> Matrix<S> {
    let n = entries.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { entries[i].clone() } else { S::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = S::zero();
                    for k in 0..inner {
                        acc.add_mul_assign(&row[k], &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn is_diagonal<S: Scalar>(m: &Matrix<S>, tol: f64) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_negligible(tol)))
}

pub fn is_lower_triangular<S: Scalar>(m: &Matrix<S>, tol: f64) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().skip(i + 1).all(|x| x.is_negligible(tol)))
}

pub fn is_upper_triangular<S: Scalar>(m: &Matrix<S>, tol: f64) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, row)| row.iter().take(i).all(|x| x.is_negligible(tol)))
}

pub fn diagonal_entries<S: Scalar>(m: &Matrix<S>) -> Vec<S> {
    m.iter().enumerate().map(|(i, row)| row[i].clone()).collect()
}

/// Index of the pivot row for column `col`: first nonzero entry in exact
/// mode, largest modulus in floating mode.
fn pivot_row<S: Scalar>(m: &Matrix<S>, col: usize, from: usize, tol: f64) -> Option<usize> {
    if S::EXACT {
        (from..m.len()).find(|&r| !m[r][col].is_zero())
    } else {
        (from..m.len())
            .filter(|&r| !m[r][col].is_negligible(tol))
            .max_by(|&a, &b| m[a][col].modulus().total_cmp(&m[b][col].modulus()))
    }
}

/// Solves `m · x = rhs` for every column of `rhs`; `None` when `m` is singular.
pub fn solve<S: Scalar>(m: &Matrix<S>, rhs: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let n = m.len();
    let k = rhs.first().map_or(0, Vec::len);
    let mut a: Matrix<S> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| row.iter().chain(r.iter()).cloned().collect())
        .collect();
    for col in 0..n {
        let p = pivot_row(&a, col, col, tol)?;
        a.swap(col, p);
        let inv = a[col][col].inv()?;
        for x in a[col].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..n + k].to_vec()).collect())
}

pub fn inverse<S: Scalar>(m: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    solve(m, &identity(m.len()), tol)
}

/// Column eigenvectors of a triangular matrix with pairwise distinct
/// diagonal entries, each normalized to 1 on its own diagonal slot.
pub fn triangular_eigenvectors<S: Scalar>(m: &Matrix<S>, tol: f64) -> Option<Matrix<S>> {
    let n = m.len();
    let lower = is_lower_triangular(m, tol);
    if !lower && !is_upper_triangular(m, tol) {
        return None;
    }
    let diag = diagonal_entries(m);
    for i in 0..n {
        for j in 0..i {
            if diag[i].approx_eq(&diag[j], tol) {
                return None;
            }
        }
    }
    let mut p: Matrix<S> = vec![vec![S::zero(); n]; n];
    for i in 0..n {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        if lower {
            for j in i + 1..n {
                let mut acc = S::zero();
                for l in i..j {
                    acc.add_mul_assign(&m[j][l], &v[l]);
                }
                v[j] = acc.div(&diag[i].sub(&diag[j]))?;
            }
        } else {
            for j in (0..i).rev() {
                let mut acc = S::zero();
                for l in j + 1..=i {
                    acc.add_mul_assign(&m[j][l], &v[l]);
                }
                v[j] = acc.div(&diag[i].sub(&diag[j]))?;
            }
        }
        for (row, x) in p.iter_mut().zip(v) {
            row[i] = x;
        }
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(n, d)
    }

    #[test]
    fn inverse_of_rational_matrix() {
        let m = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(1, 1)]];
        let inv = inverse(&m, 0.0).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity::<Cyclotomic>(2));
        let singular = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(inverse(&singular, 0.0).is_none());
    }

    #[test]
    fn triangular_eigenvectors_diagonalize() {
        let m = vec![
            vec![q(1, 2), q(0, 1), q(0, 1)],
            vec![q(3, 1), q(1, 3), q(0, 1)],
            vec![q(1, 1), q(-2, 1), q(1, 5)],
        ];
        let p = triangular_eigenvectors(&m, 0.0).unwrap();
        let pinv = inverse(&p, 0.0).unwrap();
        let d = mat_mul(&pinv, &mat_mul(&m, &p));
        assert!(is_diagonal(&d, 0.0));
        assert_eq!(diagonal_entries(&d), vec![q(1, 2), q(1, 3), q(1, 5)]);
        let mt: Matrix<Cyclotomic> = (0..3).map(|i| (0..3).map(|j| m[j][i].clone()).collect()).collect();
        let pt = triangular_eigenvectors(&mt, 0.0).unwrap();
        let d = mat_mul(&inverse(&pt, 0.0).unwrap(), &mat_mul(&mt, &pt));
        assert!(is_diagonal(&d, 0.0));
    }
}
