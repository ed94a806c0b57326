//! Linear shapes of contracting germs commuting with `γ = (ζz, ζ^q w)` up
//! to a twist, `f∘γ = γ^k∘f`.
//!
//! Writing `df(0) = [[a, b], [c, d]]`, the twisted commutation forces
//! `a ≠ 0 ⇒ k ≡ 1`, `b ≠ 0 ⇒ k ≡ q`, `c ≠ 0 ⇒ kq ≡ 1`, `d ≠ 0 ⇒ k ≡ 1`.
//! Invertibility leaves three cases.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::jet::Jet;
use crate::algebra::multi_index::MultiIndex;
use crate::error::NormalFormError;
use crate::scalar::Scalar;

/// Congruence case of `(m, q, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HjCase {
    /// `k ≡ q ≡ 1`: any invertible linear part.
    A,
    /// `k ≡ 1`, `q ≢ 1`: diagonal linear part.
    B,
    /// `k ≡ q ≢ 1`, `q² ≡ 1`: anti-diagonal linear part.
    C,
    Infeasible,
}

impl HjCase {
    pub fn label(self) -> &'static str {
        match self {
            HjCase::A => "a",
            HjCase::B => "b",
            HjCase::C => "c",
            HjCase::Infeasible => "infeasible",
        }
    }
}

/// Case analysis for `(m, q, k)`; inputs are reduced mod `m`.
pub fn classify_hj_germ(m: i64, q: i64, k: i64) -> Result<HjCase, NormalFormError> {
    if m < 1 {
        return Err(NormalFormError::Gcd(format!("group order m = {m} must be ≥ 1")));
    }
    let (q, k) = (q.rem_euclid(m), k.rem_euclid(m));
    if q.gcd(&m) != 1 {
        return Err(NormalFormError::Gcd(format!("gcd(m, q) = gcd({m}, {q}) ≠ 1")));
    }
    if k.gcd(&m) != 1 {
        return Err(NormalFormError::Gcd(format!("gcd(m, k) = gcd({m}, {k}) ≠ 1")));
    }
    let one = 1 % m;
    Ok(if k == one && q == one {
        HjCase::A
    } else if k == one {
        HjCase::B
    } else if k == q && (q * q) % m == one {
        HjCase::C
    } else {
        HjCase::Infeasible
    })
}

/// The model shapes of contracting germs on cyclic quotients.
#[derive(Clone, Debug, PartialEq)]
pub enum HjGermForm<S> {
    /// `(αz, βw)`.
    DiagonalPair { alpha: S, beta: S },
    /// `(αz, α^u w + z^u)` up to scaling of the resonant coefficient
    /// (`u = 1` is the Jordan block `(αz, αw + z)`).
    ResonantTriangular { alpha: S, u: u32 },
    /// `(βw, αz)`.
    AntiDiagonal { alpha: S, beta: S },
    /// Anything else.
    Other,
}

impl<S: Scalar> HjGermForm<S> {
    pub fn name(&self) -> &'static str {
        match self {
            HjGermForm::DiagonalPair { .. } => "diagonal_pair",
            HjGermForm::ResonantTriangular { .. } => "resonant_triangular",
            HjGermForm::AntiDiagonal { .. } => "anti_diagonal",
            HjGermForm::Other => "other",
        }
    }
}

/// Recognizes the model shape of a (normalized) germ in two variables.
pub fn identify_form<S: Scalar>(f: &Jet<S>, tol: f64) -> HjGermForm<S> {
    if f.dim() != 2 {
        return HjGermForm::Other;
    }
    let small = |x: &S| if S::EXACT { x.is_zero() } else { x.is_negligible(tol) };
    let a = f.linear_part();
    let nonlinear: Vec<(usize, MultiIndex, S)> = f
        .nonlinear_part()
        .terms()
        .filter(|(_, _, c)| !small(c))
        .map(|(k, n, c)| (k, n.clone(), c.clone()))
        .collect();
    let (a00, a01, a10, a11) = (&a[0][0], &a[0][1], &a[1][0], &a[1][1]);
    if small(a01) && small(a10) && nonlinear.is_empty() {
        return HjGermForm::DiagonalPair { alpha: a00.clone(), beta: a11.clone() };
    }
    if small(a00) && small(a11) && nonlinear.is_empty() {
        return HjGermForm::AntiDiagonal { alpha: a10.clone(), beta: a01.clone() };
    }
    if small(a01) && small(a10) && nonlinear.len() == 1 {
        let (k, n, _) = &nonlinear[0];
        let e = n.exponents();
        let (alpha, other, u) = match (k, e) {
            (1, [u, 0]) => (a00, a11, *u),
            (0, [0, u]) => (a11, a00, *u),
            _ => return HjGermForm::Other,
        };
        let matches = if S::EXACT {
            alpha.pow(u) == *other
        } else {
            alpha.pow(u).approx_eq(other, tol)
        };
        if matches {
            return HjGermForm::ResonantTriangular { alpha: alpha.clone(), u };
        }
    }
    if small(a01) && !small(a10) && a00.approx_eq(a11, tol) && nonlinear.is_empty() {
        return HjGermForm::ResonantTriangular { alpha: a00.clone(), u: 1 };
    }
    HjGermForm::Other
}
