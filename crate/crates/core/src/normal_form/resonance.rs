use crate::algebra::multi_index::{MonomialBasis, MultiIndex};
use crate::error::NormalFormError;
use crate::scalar::Scalar;

/// Resonant pairs `(n, k)` with `λ^n = λ_k` and `2 ≤ |n| ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport<S> {
    pub eigenvalues: Vec<S>,
    pub order: u32,
    /// `resonant[k]` lists the resonant monomials of coordinate `k` in
    /// graded-lex order.
    pub resonant: Vec<Vec<MultiIndex>>,
    /// No resonance exists above this degree: past it `|λ^n| < min |λ_i|`.
    pub degree_bound: u32,
    pub all_clear: bool,
}

impl<S: Scalar> ResonanceReport<S> {
    pub fn is_resonant(&self, k: usize, n: &MultiIndex) -> bool {
        self.resonant[k].binary_search_by(|m| graded_cmp(m, n)).is_ok()
    }

    /// Number of resonant pairs found.
    pub fn count(&self) -> usize {
        self.resonant.iter().map(Vec::len).sum()
    }
}

/// The basis order: degree first, then lexicographically decreasing.
fn graded_cmp(a: &MultiIndex, b: &MultiIndex) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| b.exponents().cmp(a.exponents()))
}

/// Rejects spectra with a zero eigenvalue or one of modulus ≥ 1.
pub fn check_attracting<S: Scalar>(lambda: &[S]) -> Result<(), NormalFormError> {
    for (i, l) in lambda.iter().enumerate() {
        if l.is_zero() || !l.modulus_below_one() {
            return Err(NormalFormError::NonAttracting {
                index: i,
                modulus: format!("{}", l.modulus()),
            });
        }
    }
    Ok(())
}

/// `⌊ln min|λ| / ln max|λ|⌋`: for larger degrees `|λ^n| ≤ max^|n| < min`.
fn degree_bound(moduli: &[f64]) -> u32 {
    let max = moduli.iter().copied().fold(0.0, f64::max);
    let min = moduli.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = min.ln() / max.ln();
    if ratio.is_finite() {
        (ratio + 1e-9).floor().max(1.0) as u32
    } else {
        u32::MAX
    }
}

/// All resonances of an attracting spectrum up to `order`. Exact scalars are
/// compared exactly, floats within `tol`.
pub fn resonances<S: Scalar>(lambda: &[S], order: u32, tol: f64) -> Result<ResonanceReport<S>, NormalFormError> {
    if lambda.is_empty() {
        return Err(NormalFormError::Unsupported("empty spectrum".into()));
    }
    check_attracting(lambda)?;
    let d = lambda.len();
    let mut resonant = vec![Vec::new(); d];
    if order >= 2 {
        let basis = MonomialBasis::get(d, order);
        let powers = monomial_values(&basis, lambda);
        for idx in basis.degree_range(2).start..basis.len() {
            for (k, l) in lambda.iter().enumerate() {
                let hit = if S::EXACT {
                    powers[idx] == *l
                } else {
                    powers[idx].approx_eq(l, tol)
                };
                if hit {
                    resonant[k].push(basis.monomial(idx).clone());
                }
            }
        }
    }
    let moduli: Vec<f64> = lambda.iter().map(S::modulus).collect();
    let all_clear = resonant.iter().all(Vec::is_empty);
    Ok(ResonanceReport {
        eigenvalues: lambda.to_vec(),
        order,
        resonant,
        degree_bound: degree_bound(&moduli),
        all_clear,
    })
}

/// `λ^n` for every monomial of the basis.
pub(crate) fn monomial_values<S: Scalar>(basis: &MonomialBasis, lambda: &[S]) -> Vec<S> {
    let mut out: Vec<S> = Vec::with_capacity(basis.len());
    out.push(S::one());
    for idx in 1..basis.len() {
        let m = basis.monomial(idx);
        let i = m.exponents().iter().position(|&e| e > 0).expect("nonconstant");
        let mut prev = m.exponents().to_vec();
        prev[i] -= 1;
        let p = basis.index_of(&MultiIndex::new(prev)).expect("lower degree");
        let v = out[p].mul(&lambda[i]);
        out.push(v);
    }
    out
}
