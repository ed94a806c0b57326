//! Coefficient fields for jets.
//!
//! Two modes share one trait: [`Cyclotomic`] is exact arithmetic in
//! `Q(ζ_n)` (power basis modulo the n-th cyclotomic polynomial, rational
//! coefficients) and [`Float`] is double precision complex arithmetic. A
//! computation picks one mode and stays in it.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// Residual tolerance used by floating mode unless the caller overrides it.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Field operations needed by the jet and normal form code.
///
/// Methods take references so that big-number implementations avoid clones
/// on the hot multiplication path.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + Send + Sync + 'static {
    /// `true` for exact arithmetic, where `is_zero` is a proof of vanishing.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &BigRational) -> Self;
    /// `ζ_order^power` with `ζ_order = exp(2πi/order)`.
    fn root_of_unity(order: u32, power: i64) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;
    /// Exact zero in exact mode, `|x| < tol` in floating mode.
    fn is_negligible(&self, tol: f64) -> bool;
    fn modulus(&self) -> f64;
    fn to_complex(&self) -> Complex64;
    /// The value as a rational number when it is exactly rational.
    fn as_rational(&self) -> Option<BigRational>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).is_negligible(tol)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    /// Strict comparison `|self| < 1`, exact when the value is rational.
    fn modulus_below_one(&self) -> bool {
        match self.as_rational() {
            Some(r) => r.abs() < BigRational::one(),
            None => self.modulus() < 1.0 - 1e-12,
        }
    }
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials

fn cyclotomic_cache() -> &'static RwLock<HashMap<u32, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = cyclotomic_cache().read().expect("cache poisoned").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by every Φ_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial(d);
            num = exact_int_division(&num, &divisor);
        }
    }
    let poly = Arc::new(num);
    cyclotomic_cache()
        .write()
        .expect("cache poisoned")
        .insert(n, poly.clone());
    poly
}

fn exact_int_division(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[i + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

// ---------------------------------------------------------------------------
// Exact scalars

/// An element of the cyclotomic field `Q(ζ_order)`, stored in the power
/// basis `1, ζ, …, ζ^{φ(order)-1}`.
///
/// Values that happen to be rational are always normalized to order 1, so
/// rational computations never pay for the extension.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn rational(r: BigRational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds `Σ coeffs[i] ζ_order^i` from an arbitrary-length coefficient list.
    pub fn from_power_coeffs(order: u32, coeffs: Vec<BigRational>) -> Self {
        assert!(order >= 1);
        let mut c = Cyclotomic { order, coeffs };
        c.reduce();
        c
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn reduce(&mut self) {
        self.reduce_no_normalize();
        if self.order > 1 && self.coeffs[1..].iter().all(Zero::is_zero) {
            let c0 = std::mem::replace(&mut self.coeffs[0], BigRational::zero());
            self.order = 1;
            self.coeffs = vec![c0];
        }
    }

    /// Re-expresses the element in `Q(ζ_target)`; `order` must divide `target`.
    fn lifted(&self, target: u32) -> Vec<BigRational> {
        if self.order == target {
            return self.coeffs.clone();
        }
        debug_assert_eq!(target % self.order, 0);
        let step = (target / self.order) as usize;
        let mut out = vec![BigRational::zero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * step] = c.clone();
        }
        let mut tmp = Cyclotomic {
            order: target,
            coeffs: out,
        };
        tmp.reduce_no_normalize();
        tmp.coeffs
    }

    fn reduce_no_normalize(&mut self) {
        let phi = euler_phi(self.order) as usize;
        if self.coeffs.len() > phi {
            let poly = cyclotomic_polynomial(self.order);
            for i in (phi..self.coeffs.len()).rev() {
                let c = std::mem::replace(&mut self.coeffs[i], BigRational::zero());
                if c.is_zero() {
                    continue;
                }
                for (j, &pc) in poly.iter().enumerate().take(phi) {
                    if pc != 0 {
                        self.coeffs[i - phi + j] -= &c * BigRational::from_integer(BigInt::from(pc));
                    }
                }
            }
            self.coeffs.truncate(phi);
        }
        while self.coeffs.len() < phi {
            self.coeffs.push(BigRational::zero());
        }
    }

    fn common_order(&self, other: &Self) -> u32 {
        self.order.lcm(&other.order)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let order = self.common_order(other);
        let a = self.lifted(order);
        let b = other.lifted(order);
        let coeffs = a.iter().zip(b.iter()).map(|(x, y)| f(x, y)).collect();
        Self::from_power_coeffs(order, coeffs)
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.order <= 2 {
            return self.clone();
        }
        let n = self.order as usize;
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(n - i) % n] += c;
        }
        Self::from_power_coeffs(self.order, coeffs)
    }

    /// `|x|²` as a field element (real, often rational).
    pub fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }

    fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let order = self.common_order(other);
        self.lifted(order) == other.lifted(order)
    }
}

impl Eq for Cyclotomic {}

// Polynomial helpers over Q used by the field inverse.
fn poly_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_is_zero(p: &[BigRational]) -> bool {
    p.iter().all(Zero::is_zero)
}

fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    if rem.len() < den.len() {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        if !c.is_zero() {
            for (j, dc) in den.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
        }
        quot[i] = c;
    }
    rem.truncate(dd.max(1));
    poly_trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect()
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    fn one() -> Self {
        Self::rational(BigRational::one())
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::rational(r.clone())
    }

    fn root_of_unity(order: u32, power: i64) -> Self {
        assert!(order >= 1, "root of unity of order 0");
        let e = power.rem_euclid(order as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        Self::from_power_coeffs(order, coeffs)
    }

    fn add(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        self.zip_with(other, |a, b| a + b)
    }

    fn sub(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::rational(&self.coeffs[0] - &other.coeffs[0]);
        }
        self.zip_with(other, |a, b| a - b)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let order = self.common_order(other);
        let a = self.lifted(order);
        let b = other.lifted(order);
        Self::from_power_coeffs(order, poly_mul(&a, &b))
    }

    fn neg(&self) -> Self {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Self::rational(self.coeffs[0].recip()));
        }
        // Extended Euclid: find s with a·s ≡ 1 mod Φ_order.
        let modulus: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let (mut r0, mut r1) = (modulus, self.coeffs.clone());
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        poly_trim(&mut r1);
        while !poly_is_zero(&r1) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant since Φ is irreducible.
        poly_trim(&mut r0);
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let coeffs = s0.iter().map(|x| x * &c).collect();
        Some(Self::from_power_coeffs(self.order, coeffs))
    }

    fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }

    fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let angle = 2.0 * std::f64::consts::PI * i as f64 / self.order as f64;
            acc += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    fn as_rational(&self) -> Option<BigRational> {
        (self.order == 1).then(|| self.coeffs[0].clone())
    }

    /// Exact whenever `|x|²` is rational, e.g. for `r·ζ^j`.
    fn modulus_below_one(&self) -> bool {
        match self.norm_sqr().as_rational() {
            Some(r) => r < BigRational::one(),
            None => self.modulus() < 1.0 - 1e-12,
        }
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if self.order == 1 && a.order == 1 && b.order == 1 {
            if a.coeffs[0].is_zero() || b.coeffs[0].is_zero() {
                return;
            }
            self.coeffs[0] += &a.coeffs[0] * &b.coeffs[0];
            return;
        }
        *self = self.add(&a.mul(b));
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            return f.write_str(&fmt_rational(&self.coeffs[0]));
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                terms.push(fmt_rational(c));
                continue;
            }
            let zeta = if i == 1 {
                format!("ζ_{}", self.order)
            } else {
                format!("ζ_{}^{}", self.order, i)
            };
            if c.is_one() {
                terms.push(zeta);
            } else if *c == -BigRational::one() {
                terms.push(format!("-{zeta}"));
            } else {
                terms.push(format!("{}*{}", fmt_rational(c), zeta));
            }
        }
        f.write_str(&terms.join(" + "))
    }
}

/// Parses `"3"`, `"-1/2"`, `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Scalar(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = frac_part.len() as u32;
        let int_abs: BigInt = int_part
            .trim_start_matches(['-', '+'])
            .parse::<BigInt>()
            .or_else(|_| if int_part.trim_start_matches(['-', '+']).is_empty() { Ok(BigInt::zero()) } else { Err(()) })
            .map_err(|_| bad())?;
        let frac: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(digits);
        let mut value = BigRational::new(int_abs * &scale + frac, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

fn split_terms(s: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        let separator = matches!(ch, '+' | '-')
            && !current.is_empty()
            && !matches!(prev, Some('^' | '*' | '/' | '+' | '-'));
        if separator {
            terms.push(std::mem::take(&mut current));
            if ch == '-' {
                current.push('-');
            }
        } else if !(ch == '+' && current.is_empty()) {
            current.push(ch);
        }
        prev = Some(ch);
    }
    if !current.is_empty() {
        terms.push(current);
    }
    terms
}

fn parse_zeta(s: &str) -> Option<(u32, i64)> {
    let rest = s
        .strip_prefix("ζ_")
        .or_else(|| s.strip_prefix("zeta_"))?;
    let (order, power) = match rest.split_once('^') {
        Some((o, p)) => (o.parse().ok()?, p.parse().ok()?),
        None => (rest.parse().ok()?, 1),
    };
    (order >= 1).then_some((order, power))
}

impl FromStr for Cyclotomic {
    type Err = ParseError;

    /// Accepts sums of terms `c`, `c*ζ_p^j`, `ζ_p^j`, `-ζ_p` (also spelled
    /// `zeta_p^j`); `i` is read as `ζ_4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Scalar(s.to_string());
        let terms = split_terms(s);
        if terms.is_empty() {
            return Err(bad());
        }
        let mut acc = Cyclotomic::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest.to_string()),
                None => (1, term.clone()),
            };
            let body = body.replace("*i", "*ζ_4").replace("i*", "ζ_4*");
            let body = if body == "i" { "ζ_4".to_string() } else { body };
            let value = if body.contains('ζ') || body.contains("zeta") {
                let (coef, zeta) = match body.split_once('*') {
                    Some((c, z)) if c.contains('ζ') || c.contains("zeta") => (z.to_string(), c.to_string()),
                    Some((c, z)) => (c.to_string(), z.to_string()),
                    None => ("1".to_string(), body.clone()),
                };
                let (order, power) = parse_zeta(&zeta).ok_or_else(bad)?;
                let c = parse_rational(&coef)?;
                Cyclotomic::root_of_unity(order, power).scale(&c)
            } else {
                Cyclotomic::rational(parse_rational(&body)?)
            };
            acc = if sign < 0 { acc.sub(&value) } else { acc.add(&value) };
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Floating scalars

/// Double precision complex scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Float(pub Complex64);

impl Float {
    pub fn new(re: f64, im: f64) -> Self {
        Float(Complex64::new(re, im))
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn zero() -> Self {
        Float::new(0.0, 0.0)
    }

    fn one() -> Self {
        Float::new(1.0, 0.0)
    }

    fn from_rational(r: &BigRational) -> Self {
        Float::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn root_of_unity(order: u32, power: i64) -> Self {
        let e = power.rem_euclid(order as i64);
        match (4 * e).checked_rem(order as i64) {
            // exact values at quarter turns keep symmetric sums clean
            Some(0) => match 4 * e / order as i64 {
                0 => Float::new(1.0, 0.0),
                1 => Float::new(0.0, 1.0),
                2 => Float::new(-1.0, 0.0),
                _ => Float::new(0.0, -1.0),
            },
            _ => Float(Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * e as f64 / order as f64,
            )),
        }
    }

    fn add(&self, other: &Self) -> Self {
        Float(self.0 + other.0)
    }

    fn sub(&self, other: &Self) -> Self {
        Float(self.0 - other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Float(self.0 * other.0)
    }

    fn neg(&self) -> Self {
        Float(-self.0)
    }

    fn inv(&self) -> Option<Self> {
        (self.0.norm() > 0.0).then(|| Float(self.0.inv()))
    }

    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.0.norm() < tol
    }

    fn modulus(&self) -> f64 {
        self.0.norm()
    }

    fn to_complex(&self) -> Complex64 {
        self.0
    }

    fn as_rational(&self) -> Option<BigRational> {
        None
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        self.0 += a.0 * b.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(n, d)
    }

    #[test]
    fn cyclotomic_polynomials_small_orders() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() as u32 - 1, euler_phi(n));
        }
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for p in 1..=12u32 {
            let z = Cyclotomic::root_of_unity(p, 1);
            assert!(z.pow(p).is_one(), "ζ_{p}^{p} should be 1");
            for j in 1..p {
                assert!(!z.pow(j).is_one());
            }
        }
    }

    #[test]
    fn root_sums_vanish_exactly() {
        for p in 2..=12u32 {
            let sum = (0..p).fold(Cyclotomic::zero(), |acc, j| {
                acc.add(&Cyclotomic::root_of_unity(p, j as i64))
            });
            assert!(sum.is_zero(), "sum of {p}-th roots = {sum}");
        }
    }

    #[test]
    fn mixed_orders_lift_to_common_field() {
        let a = Cyclotomic::root_of_unity(3, 1);
        let b = Cyclotomic::root_of_unity(6, 2);
        assert_eq!(a, b);
        let i = Cyclotomic::root_of_unity(4, 1);
        assert_eq!(i.mul(&i), q(-1, 1));
        let w = Cyclotomic::root_of_unity(12, 1);
        assert_eq!(w.pow(3), i);
        assert_eq!(w.pow(4), a);
    }

    #[test]
    fn inverses_in_extensions() {
        let z = Cyclotomic::root_of_unity(5, 2);
        let x = q(1, 2).add(&z.mul(&q(3, 1)));
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
        let y = Cyclotomic::root_of_unity(12, 5).sub(&q(1, 3));
        assert!(y.mul(&y.inv().unwrap()).is_one());
        assert!(Cyclotomic::zero().inv().is_none());
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for text in ["3", "-1/2", "1/2 + -3*ζ_5^2", "ζ_7", "-ζ_4", "2/3*ζ_12^5"] {
            let v: Cyclotomic = text.parse().unwrap();
            let again: Cyclotomic = v.to_string().parse().unwrap();
            assert_eq!(v, again, "{text}");
        }
        let v: Cyclotomic = "1/2-3*zeta_5^2".parse().unwrap();
        assert_eq!(v, "1/2 + -3*ζ_5^2".parse().unwrap());
        let i: Cyclotomic = "2i".replace("2i", "2*i").parse().unwrap();
        assert_eq!(i, Cyclotomic::root_of_unity(4, 1).mul(&q(2, 1)));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!("1/0".parse::<Cyclotomic>().is_err());
        assert!("ζ_".parse::<Cyclotomic>().is_err());
    }

    #[test]
    fn float_roots_agree_with_exact() {
        for p in 1..=12u32 {
            for j in 0..p as i64 {
                let e = Cyclotomic::root_of_unity(p, j).to_complex();
                let f = Float::root_of_unity(p, j).0;
                assert!((e - f).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn conjugate_and_exact_modulus() {
        let z = Cyclotomic::root_of_unity(7, 3);
        assert_eq!(z.conj(), Cyclotomic::root_of_unity(7, -3));
        assert_eq!(z.norm_sqr(), Cyclotomic::one());
        assert!(!z.modulus_below_one());
        let w = z.mul(&q(9, 10));
        assert!(w.modulus_below_one());
        assert_eq!(w.norm_sqr(), q(81, 100));
    }

    #[test]
    fn modulus_test_is_exact_for_rationals() {
        assert!(q(99, 100).modulus_below_one());
        assert!(!q(-1, 1).modulus_below_one());
        assert!(Cyclotomic::root_of_unity(5, 1).mul(&q(1, 2)).modulus_below_one());
    }
}
