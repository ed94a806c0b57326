//! Dynamics on the exceptional divisor: the eigenvalue inequality at a
//! corner, the obstruction for cycles of rational curves, and hyperbolicity
//! propagation outward from a central curve.
//!
//! Every test is multiplicative: `log|λ|/a + log|μ|/a′ < 0` is evaluated as
//! `|λ|^{a′}·|μ|^{a} < 1`, exactly for rational moduli.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{DynamicsError, GraphError};
use crate::graph::{shape, DualGraph, Shape};
use crate::scalar::{parse_rational, DEFAULT_TOLERANCE};

/// Modulus of an eigenvalue: exact when rational, otherwise a double.
#[derive(Clone, Debug, PartialEq)]
pub enum Modulus {
    Exact(BigRational),
    Float(f64),
}

impl Modulus {
    pub fn ratio(num: i64, den: i64) -> Self {
        Modulus::Exact(BigRational::new(num.into(), den.into()))
    }

    /// `"p/q"` and terminating decimals are exact; anything `f64` accepts
    /// (such as `"1e-3"`) falls back to floating point.
    pub fn parse(s: &str) -> Result<Self, DynamicsError> {
        let m = match parse_rational(s) {
            Ok(r) => Modulus::Exact(r),
            Err(_) => Modulus::Float(
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| DynamicsError::Graph(GraphError::Invalid(format!("bad modulus `{s}`"))))?,
            ),
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<(), DynamicsError> {
        let positive = match self {
            Modulus::Exact(r) => r.is_positive(),
            Modulus::Float(x) => x.is_finite() && *x > 0.0,
        };
        positive.then_some(()).ok_or(DynamicsError::ZeroModulus)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Modulus::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Modulus::Float(x) => *x,
        }
    }

    pub fn recip(&self) -> Self {
        match self {
            Modulus::Exact(r) => Modulus::Exact(r.recip()),
            Modulus::Float(x) => Modulus::Float(x.recip()),
        }
    }

    /// Position relative to 1 (floating values within tolerance count as 1).
    pub fn compare_one(&self) -> Ordering {
        match self {
            Modulus::Exact(r) => r.cmp(&BigRational::one()),
            Modulus::Float(x) if (x - 1.0).abs() <= DEFAULT_TOLERANCE => Ordering::Equal,
            Modulus::Float(x) => x.total_cmp(&1.0),
        }
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modulus::Exact(r) => write!(f, "{r}"),
            Modulus::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Modulus {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

/// The two eigenvalue moduli at `p = E ∩ E′` and the vanishing orders of
/// the maximal ideal along `E` and `E′`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerData {
    pub edge: [i64; 2],
    /// `|dF|_E(p)|`
    pub lambda: Modulus,
    /// `|dF|_{E′}(p)|`
    pub mu: Modulus,
    pub a: u32,
    pub a_prime: u32,
}

impl CornerData {
    pub fn new(edge: [i64; 2], lambda: Modulus, mu: Modulus, a: u32, a_prime: u32) -> Result<Self, DynamicsError> {
        lambda.check()?;
        mu.check()?;
        if a == 0 || a_prime == 0 {
            return Err(DynamicsError::BadVanishingOrder);
        }
        Ok(CornerData { edge, lambda, mu, a, a_prime })
    }
}

/// `r^e` for a possibly large exponent.
fn rpow(r: &BigRational, e: u64) -> BigRational {
    Pow::pow(r, BigInt::from(e))
}

/// `|λ|^{a′}·|μ|^{a} < 1`, i.e. `log|λ|/a + log|μ|/a′ < 0`.
pub fn corner_inequality(c: &CornerData) -> Result<bool, DynamicsError> {
    c.lambda.check()?;
    c.mu.check()?;
    if c.a == 0 || c.a_prime == 0 {
        return Err(DynamicsError::BadVanishingOrder);
    }
    Ok(match (&c.lambda, &c.mu) {
        (Modulus::Exact(l), Modulus::Exact(m)) => {
            rpow(l, c.a_prime as u64) * rpow(m, c.a as u64) < BigRational::one()
        }
        (l, m) => {
            let s = l.to_f64().ln() / c.a as f64 + m.to_f64().ln() / c.a_prime as f64;
            s < -DEFAULT_TOLERANCE
        }
    })
}

/// Certificate that a cycle of hyperbolic rational curves cannot carry
/// the corner inequalities: the weighted log sum telescopes to zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleCertificate {
    pub length: usize,
    /// `L = lcm(a_j)`, the exponent that clears all denominators.
    pub exponent: u64,
    /// `∏_j |λ_j|^{L/a_j}·|μ_j|^{L/a_{j+1}}`, exactly 1 under the matching.
    pub product: Modulus,
    /// `Σ_j log|λ_j|/a_j + log|μ_j|/a_{j+1}` (0 whenever the product is 1).
    pub log_sum: f64,
    /// The strict system "every corner sum < 0" has no solution.
    pub infeasible: bool,
}

impl fmt::Display for CycleCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "product {} over {} corners (exponent {})", self.product, self.length, self.exponent)
    }
}

/// Corner `j` sits on `E_j ∩ E_{j+1}` (indices mod n) with `λ_j` along
/// `E_j` and `μ_j` along `E_{j+1}`. Requires the hyperbolic matching
/// `|λ_j·μ_{j−1}| = 1` and consistent vanishing orders.
pub fn cycle_obstruction(cycle: &[CornerData]) -> Result<CycleCertificate, DynamicsError> {
    let n = cycle.len();
    if n == 0 {
        return Err(DynamicsError::EmptyCycle);
    }
    for (j, c) in cycle.iter().enumerate() {
        c.lambda.check()?;
        c.mu.check()?;
        if c.a == 0 || c.a_prime == 0 {
            return Err(DynamicsError::BadVanishingOrder);
        }
        let prev = &cycle[(j + n - 1) % n];
        if prev.a_prime != c.a {
            return Err(DynamicsError::InconsistentOrders(j));
        }
        let matched = match (&c.lambda, &prev.mu) {
            (Modulus::Exact(l), Modulus::Exact(m)) => (l * m).is_one(),
            (l, m) => (l.to_f64() * m.to_f64() - 1.0).abs() <= DEFAULT_TOLERANCE,
        };
        if !matched {
            return Err(DynamicsError::MatchingViolated(j));
        }
    }
    let exponent = cycle.iter().fold(1u64, |l, c| l.lcm(&(c.a as u64)));
    let all_exact = cycle.iter().all(|c| matches!((&c.lambda, &c.mu), (Modulus::Exact(_), Modulus::Exact(_))));
    let log_sum: f64 =
        cycle.iter().map(|c| c.lambda.to_f64().ln() / c.a as f64 + c.mu.to_f64().ln() / c.a_prime as f64).sum();
    let (product, telescopes) = if all_exact {
        let mut p = BigRational::one();
        for c in cycle {
            let (Modulus::Exact(l), Modulus::Exact(m)) = (&c.lambda, &c.mu) else { unreachable!() };
            p *= rpow(l, exponent / c.a as u64) * rpow(m, exponent / c.a_prime as u64);
        }
        let one = p.is_one();
        (Modulus::Exact(p), one)
    } else {
        (Modulus::Float(log_sum.exp()), log_sum.abs() <= DEFAULT_TOLERANCE * n as f64)
    };
    let log_sum = if all_exact && telescopes { 0.0 } else { log_sum };
    Ok(CycleCertificate { length: n, exponent, product, log_sum, infeasible: telescopes })
}

/// The corners of a cycle-shaped graph in cyclic order. Moduli come from
/// the dynamics annotation when every corner is annotated; otherwise the
/// witness `|λ_j| = 1/2`, `|μ_j| = 2` is used. The flag reports which.
pub fn cycle_corners(g: &DualGraph) -> Result<(Vec<CornerData>, bool), DynamicsError> {
    if shape(g) != Shape::Cycle {
        return Err(GraphError::Invalid("graph is not a cycle".into()).into());
    }
    let n = g.edges.len();
    let mut used = vec![false; n];
    let start = g.vertices[0].id;
    let mut walk = Vec::with_capacity(n);
    let mut cur = start;
    for _ in 0..n {
        let (k, next) = g
            .edges
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .find_map(|(k, [a, b])| {
                if *a == cur {
                    Some((k, *b))
                } else if *b == cur {
                    Some((k, *a))
                } else {
                    None
                }
            })
            .ok_or(DynamicsError::EmptyCycle)?;
        used[k] = true;
        walk.push([cur, next]);
        cur = next;
    }
    let order = |id: i64| g.vertex(id).map(|v| v.a.unwrap_or(1));
    let annotations = g.dynamics.as_ref().map(|d| d.corners.as_slice()).unwrap_or_default();
    let lookup = |[e, f]: [i64; 2]| -> Result<Option<(Modulus, Modulus)>, DynamicsError> {
        // a loop is annotated once; a repeated edge cannot tell its corners apart
        let hits: Vec<_> = annotations.iter().filter(|c| c.edge == [e, f] || c.edge == [f, e]).collect();
        let [hit] = hits.as_slice() else { return Ok(None) };
        let (l, m) = (Modulus::parse(&hit.mod_lambda)?, Modulus::parse(&hit.mod_mu)?);
        Ok(Some(if hit.edge == [e, f] { (l, m) } else { (m, l) }))
    };
    let mut annotated = Vec::with_capacity(n);
    for &edge in &walk {
        match lookup(edge)? {
            Some(pair) => annotated.push(pair),
            None => break,
        }
    }
    let from_annotation = annotated.len() == n && n > 2;
    let mut corners = Vec::with_capacity(n);
    for (j, &edge) in walk.iter().enumerate() {
        let (lambda, mu) = if from_annotation {
            annotated[j].clone()
        } else {
            (Modulus::ratio(1, 2), Modulus::ratio(2, 1))
        };
        corners.push(CornerData::new(edge, lambda, mu, order(edge[0])?, order(edge[1])?)?);
    }
    Ok((corners, from_annotation))
}

/// Behaviour of the first return map on one curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexTag {
    Hyperbolic,
    /// The rational center, not hyperbolic.
    NonHyperbolic,
    /// A center of positive genus, where the action has finite order.
    FiniteOrder,
}

/// Trichotomy of an eigenvalue modulus at a corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Contracting,
    Unit,
    Expanding,
}

impl Side {
    fn of(m: &Modulus) -> Side {
        match m.compare_one() {
            Ordering::Less => Side::Contracting,
            Ordering::Equal => Side::Unit,
            Ordering::Greater => Side::Expanding,
        }
    }
}

/// A corner `near ∩ far` with `far` one step farther from the center.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrientedCorner {
    pub near: i64,
    pub far: i64,
    /// `Unit` on the center, `Expanding` elsewhere.
    pub near_side: Side,
    /// Always `Contracting`.
    pub far_side: Side,
    /// Concrete moduli realizing the orientation: `(1/2)^{a·d}` along the
    /// farther curve at distance `d` and the reciprocal (or 1 on the center)
    /// along the nearer one. Edge order `[near, far]`.
    pub witness: CornerData,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperbolicityLabeling {
    pub center: i64,
    pub tags: BTreeMap<i64, VertexTag>,
    pub distance: BTreeMap<i64, usize>,
    pub corners: Vec<OrientedCorner>,
}

impl HyperbolicityLabeling {
    pub fn non_hyperbolic_count(&self) -> usize {
        self.tags.values().filter(|t| **t != VertexTag::Hyperbolic).count()
    }
}

/// Breadth-first labeling from `center`: every other vertex hyperbolic, each
/// corner contracting on the farther side. Non-center vertices must have
/// degree ≤ 2, so the rest of the graph splits into chains. Annotated
/// corners are checked against the orientation and the corner inequality.
pub fn propagate_hyperbolicity(g: &DualGraph, center: i64) -> Result<HyperbolicityLabeling, DynamicsError> {
    let c = g.index_of(center)?;
    if !g.is_tree() {
        return Err(DynamicsError::NotATree);
    }
    let adj = g.adjacency();
    let dist: Vec<usize> = g.distances(c).into_iter().map(|d| d.expect("trees are connected")).collect();
    let mut tags = BTreeMap::new();
    let mut distance = BTreeMap::new();
    for (i, v) in g.vertices.iter().enumerate() {
        distance.insert(v.id, dist[i]);
        if i == c {
            tags.insert(v.id, if v.genus > 0 { VertexTag::FiniteOrder } else { VertexTag::NonHyperbolic });
            continue;
        }
        if adj[i].len() >= 3 {
            return Err(DynamicsError::NonCenterBranch(v.id));
        }
        if adj[i].iter().filter(|&&j| dist[j] < dist[i]).count() != 1 {
            return Err(DynamicsError::NonUniqueParent(v.id));
        }
        tags.insert(v.id, VertexTag::Hyperbolic);
    }
    let order = |i: usize| g.vertices[i].a.unwrap_or(1) as u64;
    // contracting modulus of a vertex at its parent corner
    let contracting = |i: usize| Modulus::Exact(rpow(&BigRational::new(1.into(), 2.into()), order(i) * dist[i] as u64));
    let mut corners = Vec::with_capacity(g.edges.len());
    let mut by_near: Vec<(usize, usize)> = Vec::new();
    for [x, y] in &g.edges {
        let (i, j) = (g.index_of(*x)?, g.index_of(*y)?);
        by_near.push(if dist[i] < dist[j] { (i, j) } else { (j, i) });
    }
    by_near.sort_by_key(|&(i, j)| (dist[j], g.vertices[i].id, g.vertices[j].id));
    for (i, j) in by_near {
        let (near, far) = (g.vertices[i].id, g.vertices[j].id);
        let near_side = if i == c { Side::Unit } else { Side::Expanding };
        let lambda = if i == c { Modulus::ratio(1, 1) } else { contracting(i).recip() };
        let witness = CornerData::new([near, far], lambda, contracting(j), order(i) as u32, order(j) as u32)?;
        corners.push(OrientedCorner { near, far, near_side, far_side: Side::Contracting, witness });
    }
    if let Some(d) = &g.dynamics {
        for a in &d.corners {
            check_annotation(g, &corners, a)?;
        }
    }
    Ok(HyperbolicityLabeling { center, tags, distance, corners })
}

fn check_annotation(
    g: &DualGraph,
    corners: &[OrientedCorner],
    a: &crate::graph::CornerAnnotation,
) -> Result<(), DynamicsError> {
    let mismatch = |reason: String| DynamicsError::AnnotationMismatch { edge: a.edge, reason };
    let oc = corners
        .iter()
        .find(|c| a.edge == [c.near, c.far] || a.edge == [c.far, c.near])
        .ok_or_else(|| mismatch("not an edge of the graph".into()))?;
    let (l, m) = (Modulus::parse(&a.mod_lambda)?, Modulus::parse(&a.mod_mu)?);
    let (near_mod, far_mod) = if a.edge[0] == oc.near { (l, m) } else { (m, l) };
    if Side::of(&far_mod) != Side::Contracting {
        return Err(mismatch(format!("modulus {far_mod} along {} should be < 1", oc.far)));
    }
    if Side::of(&near_mod) != oc.near_side {
        return Err(mismatch(format!("modulus {near_mod} along {} should be {:?}", oc.near, oc.near_side)));
    }
    let order = |id: i64| g.vertex(id).map(|v| v.a.unwrap_or(1));
    let cd = CornerData::new([oc.near, oc.far], near_mod, far_mod, order(oc.near)?, order(oc.far)?)?;
    if !corner_inequality(&cd)? {
        return Err(mismatch("corner inequality fails".into()));
    }
    Ok(())
}

/// Outcome of the central curve test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CentralVerdict {
    pub accepted: bool,
    pub note: String,
}

/// A central curve of positive genus must carry a finite order action.
pub fn central_component_check(genus: u32, is_finite_order: bool) -> CentralVerdict {
    match (genus, is_finite_order) {
        (g, false) if g >= 1 => CentralVerdict {
            accepted: false,
            note: format!("genus {g} center with an infinite order action"),
        },
        (0, false) => CentralVerdict {
            accepted: true,
            note: "rational center of infinite order: the configuration reduces to a chain".into(),
        },
        (g, true) => CentralVerdict { accepted: true, note: format!("genus {g} center of finite order") },
        _ => unreachable!(),
    }
}
