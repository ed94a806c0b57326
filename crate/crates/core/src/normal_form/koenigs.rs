//! Koenigs linearization of families `f(z, w) = (z, αw(1 + ε(z, w)))`.
//!
//! The linearizing coordinate is `η = w ∏_{n≥0} (1 + ε∘f^n)`, so that
//! `η∘f = α·η` and `∂η/∂w(z, 0) = 1`.

use crate::algebra::jet::{compose, mul_truncated, Jet};
use crate::algebra::multi_index::MultiIndex;
use crate::error::NormalFormError;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KoenigsMethod {
    /// Partial products `P_0, …, P_{N-1}` with the geometric modes `α^j`,
    /// `1 ≤ j < N`, eliminated exactly. Coefficient-exact.
    Extrapolated,
    /// Product truncated at a depth where the tail is below tolerance.
    Truncated,
}

#[derive(Clone, Debug)]
pub struct KoenigsResult<S> {
    /// The map `(z, η(z, w))`.
    pub linearization: Jet<S>,
    pub alpha: S,
    pub method: KoenigsMethod,
    /// Number of product factors used.
    pub depth: u64,
    /// Largest coefficient of `η∘f − α·η`.
    pub residual_norm: f64,
}

impl<S: Scalar> KoenigsResult<S> {
    /// The coordinate `η` as a coefficient vector.
    pub fn eta(&self) -> &[S] {
        self.linearization.coordinate(1)
    }
}

/// `α` and `ε` of a family, with `ε` stored as a scalar polynomial.
struct Family<S> {
    alpha: S,
    epsilon: Vec<S>,
}

fn parse_family<S: Scalar>(f: &Jet<S>) -> Result<Family<S>, NormalFormError> {
    let bad = |msg: &str| NormalFormError::InvalidFamily(msg.to_string());
    if f.dim() != 2 {
        return Err(bad("family must be a map of two variables"));
    }
    let z = MultiIndex::new(vec![1, 0]);
    let w = MultiIndex::new(vec![0, 1]);
    for (k, n, c) in f.terms() {
        if k == 0 && !(n == &z && c.is_one()) {
            return Err(bad("first coordinate must be exactly z"));
        }
    }
    if !f.coeff(0, &z).is_one() {
        return Err(bad("first coordinate must be exactly z"));
    }
    let alpha = f.coeff(1, &w);
    if alpha.is_zero() || !alpha.modulus_below_one() {
        return Err(NormalFormError::NonAttracting {
            index: 1,
            modulus: format!("{}", alpha.modulus()),
        });
    }
    let inv_alpha = alpha.inv().expect("nonzero");
    let basis = f.basis().clone();
    let mut epsilon = vec![S::zero(); basis.len()];
    for (k, n, c) in f.terms() {
        if k != 1 || n == &w {
            continue;
        }
        let e = n.exponents();
        if e[1] < 2 {
            return Err(bad("ε must be divisible by w (second coordinate minus αw must be divisible by w²)"));
        }
        let shifted = MultiIndex::new(vec![e[0], e[1] - 1]);
        let idx = basis.index_of(&shifted).expect("lower degree");
        epsilon[idx] = c.mul(&inv_alpha);
    }
    Ok(Family { alpha, epsilon })
}

fn w_poly<S: Scalar>(f: &Jet<S>) -> Vec<S> {
    let mut p = vec![S::zero(); f.basis().len()];
    p[f.basis().index_of(&MultiIndex::new(vec![0, 1])).expect("degree 1")] = S::one();
    p
}

fn with_eta<S: Scalar>(order: u32, eta: &[S]) -> Jet<S> {
    let mut j = Jet::zero(2, order);
    j.set_coeff(0, &MultiIndex::new(vec![1, 0]), S::one()).expect("degree 1");
    let basis = j.basis().clone();
    for (idx, c) in eta.iter().enumerate() {
        if !c.is_zero() {
            j.set_coeff(1, basis.monomial(idx), c.clone()).expect("same basis");
        }
    }
    j
}

/// `η∘f − α·η`, coordinate 1 only.
pub fn conjugacy_residual<S: Scalar>(eta: &[S], f: &Jet<S>, alpha: &S) -> Vec<S> {
    let composed = f.substitute_into(eta, f.basis());
    composed.iter().zip(eta).map(|(a, b)| a.sub(&alpha.mul(b))).collect()
}

/// Partial products `P_D = w ∏_{n<D} (1 + ε∘f^n)` for `D = 0..count`.
fn partial_products<S: Scalar>(f: &Jet<S>, family: &Family<S>, count: usize) -> Result<Vec<Vec<S>>, NormalFormError> {
    let order = f.order();
    let basis = f.basis().clone();
    let mut iterate = Jet::identity(2, order);
    let mut p = w_poly(f);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(p.clone());
        let mut factor = iterate.substitute_into(&family.epsilon, &basis);
        factor[0] = factor[0].add(&S::one());
        p = mul_truncated(&basis, &p, &factor);
        iterate = compose(f, &iterate, order)?;
    }
    Ok(out)
}

/// `η` up to `order`. Exact scalars get the extrapolated exact limit;
/// floating scalars truncate the product once `bound·|α|^D < tol`.
pub fn koenigs<S: Scalar>(f: &Jet<S>, order: u32, tol: f64) -> Result<KoenigsResult<S>, NormalFormError> {
    if f.order() < order {
        return Err(crate::error::AlgebraError::OrderUnderflow { have: f.order(), need: order }.into());
    }
    let f = f.with_order(order);
    let family = parse_family(&f)?;
    let (eta, method, depth) = if S::EXACT {
        let n = order as usize;
        let mut seq = partial_products(&f, &family, n)?;
        for j in 1..n as u32 {
            let r = family.alpha.pow(j);
            let scale = S::one().sub(&r).inv().expect("α^j ≠ 1 for |α| < 1");
            seq = seq
                .windows(2)
                .map(|w| {
                    w[1].iter()
                        .zip(&w[0])
                        .map(|(next, cur)| next.sub(&r.mul(cur)).mul(&scale))
                        .collect()
                })
                .collect();
        }
        (seq.pop().expect("one term left"), KoenigsMethod::Extrapolated, n as u64)
    } else {
        let bound = family.epsilon.iter().map(S::modulus).fold(1.0, f64::max);
        let ratio = family.alpha.modulus();
        let depth = ((tol / bound).ln() / ratio.ln()).ceil().clamp(1.0, (1u64 << 40) as f64) as u64;
        (truncated_product(&f, &family, depth)?, KoenigsMethod::Truncated, depth)
    };
    let residual = conjugacy_residual(&eta, &f, &family.alpha);
    let residual_norm = residual.iter().map(S::modulus).fold(0.0, f64::max);
    Ok(KoenigsResult {
        linearization: with_eta(order, &eta),
        alpha: family.alpha,
        method,
        depth,
        residual_norm,
    })
}

/// `P_D` for large `D` via `P_D = α^{-D}·(f^D)_2`, with `f^D` by binary
/// powering; the identity holds because `(f^D)_2 = α^D w ∏_{n<D}(1 + ε∘f^n)`.
fn truncated_product<S: Scalar>(f: &Jet<S>, family: &Family<S>, depth: u64) -> Result<Vec<S>, NormalFormError> {
    let order = f.order();
    let mut result = Jet::identity(2, order);
    let mut base = f.clone();
    let mut e = depth;
    while e > 0 {
        if e & 1 == 1 {
            result = compose(&base, &result, order)?;
        }
        e >>= 1;
        if e > 0 {
            base = compose(&base, &base, order)?;
        }
    }
    let mut scale = S::one();
    let inv = family.alpha.inv().expect("nonzero");
    // α^{-D} by repeated squaring of the inverse
    let mut b = inv;
    let mut e = depth;
    while e > 0 {
        if e & 1 == 1 {
            scale = scale.mul(&b);
        }
        e >>= 1;
        if e > 0 {
            b = b.mul(&b);
        }
    }
    Ok(result.coordinate(1).iter().map(|c| c.mul(&scale)).collect())
}

/// Independent oracle: solves `η∘f = α·η` by increasing `w`-degree with
/// `η = w + Σ h_{ab} z^a w^b`, `b ≥ 2`.
pub fn solve_conjugacy_equation<S: Scalar>(f: &Jet<S>, order: u32) -> Result<Jet<S>, NormalFormError> {
    if f.order() < order {
        return Err(crate::error::AlgebraError::OrderUnderflow { have: f.order(), need: order }.into());
    }
    let f = f.with_order(order);
    let family = parse_family(&f)?;
    let basis = f.basis().clone();
    let mut eta = w_poly(&f);
    for b in 2..=order {
        let residual = conjugacy_residual(&eta, &f, &family.alpha);
        let denom = family.alpha.pow(b).sub(&family.alpha);
        let inv = denom.inv().expect("α^b ≠ α for 0 < |α| < 1");
        for a in 0..=(order - b) {
            let idx = basis.index_of(&MultiIndex::new(vec![a, b])).expect("degree ≤ order");
            if !residual[idx].is_zero() {
                eta[idx] = eta[idx].sub(&residual[idx].mul(&inv));
            }
        }
    }
    Ok(with_eta(order, &eta))
}
