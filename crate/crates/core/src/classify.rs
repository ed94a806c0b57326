//! End-to-end classification of an admissible configuration: a resolution
//! dual graph with dynamics data, plus either a germ (chain case) or data on
//! the central curve (star case).
//!
//! ```json
//! {"graph": {"vertices": [{"id": 0, "genus": 0, "self": -3}, {"id": 1, "genus": 0, "self": -2}],
//!            "edges": [[0, 1]]},
//!  "germ": {"jet": {…}, "group": {"order": 5, "weights": [1, 2]}, "k_twist": 1},
//!  "central": {"finite_order": true, "period": 3, "bundle": {"e": -2, "local": [[2, 1]]}}}
//! ```

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::algebra::codec::{GermDocument, JsonScalar};
use crate::algebra::group::DiagonalGroup;
use crate::dynamics::{
    central_component_check, cycle_corners, cycle_obstruction, propagate_hyperbolicity, HyperbolicityLabeling,
};
use crate::error::{ClassifyError, DynamicsError, GraphError};
use crate::graph::{
    chain_order, hj_fold, intersection_matrix, is_negative_definite, legs, minimal_negative_model, shape,
    CyclicQuotientData, DualGraph, Shape,
};
use crate::normal_form::{classify_hj_germ, identify_form, poincare_dulac, HjCase};
use crate::orbifold::{
    canonical_cover_degree, classify_orbifold, orbidegree, smooth_cover_data, BundleDocument, Geometry,
    OrbibundleData, OrbifoldSurface,
};
use crate::scalar::{Cyclotomic, Float, DEFAULT_TOLERANCE};

/// Data on the central curve of a star.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralData {
    /// The first return map on the central curve has finite order.
    #[serde(default)]
    pub finite_order: bool,
    /// Its order `N` (`f^N` lies in the `C*`-flow); 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<u64>,
    /// Explicit orbibundle data. Without it, `e` is the self-intersection
    /// of the central curve and `b_i = q_i` for the leg `m_i/q_i` read from
    /// the center outward.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibleDataDocument {
    pub graph: DualGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<GermDocument>,
    /// Twist `k` for the chain case when no germ is given (default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_twist: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central: Option<CentralData>,
}

impl AdmissibleDataDocument {
    pub fn from_graph(graph: DualGraph) -> Self {
        AdmissibleDataDocument { graph, germ: None, k_twist: None, central: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Truncation order for germ normalization.
    pub order: u32,
    pub mode: Mode,
    pub tol: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { order: 8, mode: Mode::Exact, tol: DEFAULT_TOLERANCE }
    }
}

/// What the germ normalization found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GermSummary {
    pub treatment: String,
    pub form: String,
    pub linear: bool,
    pub resonant_monomials: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Variant {
    CyclicQuotient {
        m: i64,
        /// Read so that `q ≤ q′`; `chain` is the matching orientation.
        q: i64,
        q_dual: i64,
        k_twist: i64,
        case: HjCase,
        /// `b_i` of the minimal chain.
        chain: Vec<i64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        germ: Option<GermSummary>,
    },
    WeightedHomogeneous {
        base: OrbifoldSurface,
        geometry: Geometry,
        euler_characteristic: String,
        orbidegree: String,
        bundle: OrbibundleData,
        /// `N` with `f^N` in the flow of the `C*`-action.
        period: u64,
        /// `(m_i, q_i)` of the legs, sorted.
        legs: Vec<CyclicQuotientData>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProvenanceEntry {
    pub step: String,
    pub theorem: String,
    pub quote: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub variant: Variant,
    pub provenance: Vec<ProvenanceEntry>,
    pub residuals: BTreeMap<String, f64>,
}

struct Log(Vec<ProvenanceEntry>);

impl Log {
    fn push(&mut self, step: &str, theorem: &str, quote: impl Into<String>) {
        self.0.push(ProvenanceEntry { step: step.into(), theorem: theorem.into(), quote: quote.into() });
    }
}

/// Runs the pipeline: minimal model, shape, then the chain or star branch.
pub fn classify_singularity(doc: &AdmissibleDataDocument, opts: &ClassifyOptions) -> Result<Classification, ClassifyError> {
    let g = &doc.graph;
    g.validate()?;
    if g.is_empty() {
        return Err(GraphError::Invalid("empty exceptional curve".into()).into());
    }
    let mut log = Log(Vec::new());
    match shape(g) {
        Shape::Cycle => return Err(cycle_error(g)?),
        Shape::Other => return Err(ClassifyError::Inconsistent("dual graph is neither a tree nor a cycle".into())),
        _ => {}
    }
    if !is_negative_definite(&intersection_matrix(g)) {
        return Err(GraphError::NotContractible.into());
    }
    log.push("contractibility", "negative definiteness", "the intersection matrix passes the exact Sylvester test");
    let min = minimal_negative_model(g)?;
    log.push(
        "minimal_model",
        "blow-down of exceptional curves",
        format!("contracted {:?}; {} curves remain", min.contracted, min.graph.len()),
    );
    let m = &min.graph;
    let sh = shape(m);
    let positive_genus: Vec<i64> = m.vertices.iter().filter(|v| v.genus > 0).map(|v| v.id).collect();
    let designated = m.dynamics.as_ref().and_then(|d| d.center);
    match sh {
        Shape::Cycle => Err(cycle_error(m)?),
        Shape::GeneralTree => Err(ClassifyError::TwoBranchPoints),
        Shape::Other => Err(ClassifyError::Inconsistent("minimal model is neither a tree nor a cycle".into())),
        Shape::Chain if positive_genus.is_empty() => {
            log.push("shape", "chain configurations", "the minimal model is a chain of rational curves");
            if let Some(c) = designated {
                reroute_note(m, c, doc, &mut log)?;
            }
            chain_case(m, doc, opts, log)
        }
        Shape::Chain => {
            let [c] = positive_genus.as_slice() else {
                return Err(GraphError::NonRationalLeg(positive_genus[1]).into());
            };
            log.push("shape", "star configurations", format!("chain around the irrational curve {c}"));
            star_case(m, *c, doc, log)
        }
        Shape::StarShaped { center } => {
            if let Some(&v) = positive_genus.iter().find(|&&v| v != center) {
                return Err(GraphError::NonRationalLeg(v).into());
            }
            log.push("shape", "star configurations", format!("one branch curve {center}"));
            star_case(m, center, doc, log)
        }
    }
}

fn cycle_error(g: &DualGraph) -> Result<ClassifyError, ClassifyError> {
    let (corners, _) = cycle_corners(g)?;
    let cert = cycle_obstruction(&corners)?;
    Ok(ClassifyError::CycleExcluded { certificate: cert.to_string() })
}

/// Labels the chain from one of its ends (or the designated center) to
/// check the dynamics annotation.
fn chain_labeling(m: &DualGraph, order: &[i64]) -> Result<HyperbolicityLabeling, ClassifyError> {
    if let Some(c) = m.dynamics.as_ref().and_then(|d| d.center) {
        return Ok(propagate_hyperbolicity(m, c)?);
    }
    let first = propagate_hyperbolicity(m, order[0]);
    match first {
        Ok(l) => Ok(l),
        Err(e) => propagate_hyperbolicity(m, *order.last().expect("nonempty")).map_err(|_| e.into()),
    }
}

/// A chain with a designated center: the base is `P¹` with at most two cone
/// points; either it is bad, or it is a global quotient whose singularity is
/// still cyclic. Both lead back to the chain branch.
fn reroute_note(m: &DualGraph, c: i64, doc: &AdmissibleDataDocument, log: &mut Log) -> Result<(), ClassifyError> {
    propagate_hyperbolicity(m, c)?;
    let finite = doc.central.as_ref().is_some_and(|d| d.finite_order);
    let v = central_component_check(0, finite);
    let (base, _) = leg_data(m, c, 0)?;
    let geometry = classify_orbifold(&base);
    let reason = if geometry == Geometry::Bad { "bad orbifold" } else { "at most two cone points" };
    log.push(
        "reroute",
        "bad orbifolds and chains",
        format!("center {c} ({}): base {base} is {geometry:?}; {reason}, handled as a cyclic quotient", v.note),
    );
    Ok(())
}

fn chain_case(
    m: &DualGraph,
    doc: &AdmissibleDataDocument,
    opts: &ClassifyOptions,
    mut log: Log,
) -> Result<Classification, ClassifyError> {
    let order = chain_order(m)?;
    if !order.is_empty() {
        chain_labeling(m, &order)?;
        log.push("dynamics", "hyperbolicity along chains", "every corner has a contracting side");
    }
    let b: Vec<i64> = order.iter().map(|&id| m.vertex(id).map(|v| -v.self_intersection)).collect::<Result<_, _>>()?;
    let folded = hj_fold(&b)?;
    let (mq, q_dual) = (folded.m, folded.dual().q);
    let group = doc.germ.as_ref().and_then(|g| g.group.clone());
    let q = match &group {
        Some(gr) => group_weight(gr, mq)?,
        None => folded.q.min(q_dual),
    };
    if q != folded.q && q != q_dual {
        return Err(ClassifyError::Inconsistent(format!("group weight {q} matches neither {} nor {q_dual}", folded.q)));
    }
    let mut chain = b;
    if q != folded.q {
        chain.reverse();
    }
    log.push("hj_fold", "cyclic quotient resolution", format!("chain {chain:?} folds to ({mq}, {q})"));
    let k = doc.germ.as_ref().and_then(|g| g.k_twist).or(doc.k_twist).unwrap_or(1);
    let case = classify_hj_germ(mq, q, k)?;
    if case == HjCase::Infeasible {
        return Err(ClassifyError::Inconsistent(format!("no invertible linear germ for (m, q, k) = ({mq}, {q}, {k})")));
    }
    let k = k.rem_euclid(mq);
    log.push("germ_case", "linear parts over cyclic quotients", format!("(m, q, k) = ({mq}, {q}, {k}) is case {}", case.label()));
    let mut residuals = BTreeMap::new();
    let germ = match &doc.germ {
        None => None,
        Some(gd) => {
            let gr = match group {
                Some(gr) => gr,
                None => DiagonalGroup::cyclic_quotient(mq as u32, q)?,
            };
            let s = match opts.mode {
                Mode::Exact => normalize_germ::<Cyclotomic>(gd, &gr, k, opts)?,
                Mode::Float => normalize_germ::<Float>(gd, &gr, k, opts)?,
            };
            residuals.insert("conjugacy".into(), s.1);
            residuals.insert("group".into(), s.2);
            log.push(
                "normal_form",
                "equivariant Poincaré-Dulac normalization",
                format!("normal form of type {} through order {}", s.0.form, opts.order),
            );
            Some(s.0)
        }
    };
    Ok(Classification {
        variant: Variant::CyclicQuotient { m: mq, q, q_dual: CyclicQuotientData::new(mq, q)?.dual().q, k_twist: k, case, chain, germ },
        provenance: log.0,
        residuals,
    })
}

/// `q` of a group `(ζ^{w_0}, ζ^{w_1})` of order `m`, normalized to `w_0 = 1`.
fn group_weight(gr: &DiagonalGroup, m: i64) -> Result<i64, ClassifyError> {
    let w = gr.weights();
    if gr.order() as i64 != m || w.len() != 2 {
        return Err(ClassifyError::Inconsistent(format!(
            "group of order {} in dimension {} does not match the chain (m = {m})",
            gr.order(),
            w.len()
        )));
    }
    if m == 1 {
        return Ok(1);
    }
    let e = w[0].extended_gcd(&m);
    if e.gcd != 1 {
        return Err(ClassifyError::Inconsistent(format!("first weight {} is not prime to {m}", w[0])));
    }
    Ok((w[1] * e.x).rem_euclid(m))
}

fn normalize_germ<S: JsonScalar>(
    gd: &GermDocument,
    gr: &DiagonalGroup,
    k: i64,
    opts: &ClassifyOptions,
) -> Result<(GermSummary, f64, f64), ClassifyError> {
    let f = gd.jet.to_jet::<S>()?;
    let order = opts.order.min(f.order());
    let r = poincare_dulac(&f, gr, k, order, opts.tol)?;
    let summary = GermSummary {
        treatment: format!("{:?}", r.treatment),
        form: identify_form(&r.normal_form, opts.tol).name().into(),
        linear: r.is_linear(opts.tol),
        resonant_monomials: r.resonance.as_ref().map_or(0, |x| x.count()),
    };
    Ok((summary, r.residual_norm, r.group_residual_norm))
}

/// Orbifold of the center `c` with one cone point per leg.
fn leg_data(m: &DualGraph, c: i64, genus: u32) -> Result<(OrbifoldSurface, Vec<CyclicQuotientData>), ClassifyError> {
    let mut folded = Vec::new();
    for leg in legs(m, c)? {
        let mut b = Vec::with_capacity(leg.len());
        for id in leg {
            let v = m.vertex(id)?;
            if v.genus > 0 {
                return Err(GraphError::NonRationalLeg(id).into());
            }
            b.push(-v.self_intersection);
        }
        folded.push(hj_fold(&b)?);
    }
    folded.sort_by_key(|c| (c.m, c.q));
    let marks: Vec<i64> = folded.iter().map(|c| c.m).collect();
    Ok((OrbifoldSurface::new(genus, &marks)?, folded))
}

fn star_case(m: &DualGraph, c: i64, doc: &AdmissibleDataDocument, mut log: Log) -> Result<Classification, ClassifyError> {
    if doc.germ.is_some() {
        return Err(ClassifyError::Inconsistent("germ data given for a configuration with a central curve".into()));
    }
    if let Some(d) = m.dynamics.as_ref().and_then(|d| d.center) {
        if d != c {
            return Err(ClassifyError::Inconsistent(format!("annotated center {d} but the branch curve is {c}")));
        }
    }
    let labeling = propagate_hyperbolicity(m, c).map_err(|e| match e {
        DynamicsError::NonCenterBranch(_) => ClassifyError::TwoBranchPoints,
        e => e.into(),
    })?;
    log.push(
        "dynamics",
        "hyperbolicity off the center",
        format!("{} curves hyperbolic, corners contract away from {c}", labeling.tags.len() - 1),
    );
    let center = m.vertex(c)?;
    let central = doc.central.clone().unwrap_or_default();
    let verdict = central_component_check(center.genus, central.finite_order);
    if !verdict.accepted {
        return Err(ClassifyError::CentralComponent(verdict.note));
    }
    log.push("central_component", "dynamics on the central curve", verdict.note);
    let (base, folded) = leg_data(m, c, center.genus)?;
    let geometry = classify_orbifold(&base);
    if geometry == Geometry::Bad {
        // three or more legs never give a bad base; a chain never gets here
        return Err(ClassifyError::Inconsistent(format!("bad base {base} on a star")));
    }
    log.push("orbifold", "geometrization of orbifolds", format!("base {base} is {geometry:?}"));
    let bundle = match &central.bundle {
        Some(b) => {
            let local: Vec<(i64, i64)> = b.local.iter().map(|[m, b]| (*m, *b)).collect();
            OrbibundleData::new(base.clone(), b.e, &local)?
        }
        None => {
            let local: Vec<(i64, i64)> = folded.iter().map(|c| (c.m, if c.m == 1 { 0 } else { c.q })).collect();
            OrbibundleData::new(base.clone(), center.self_intersection, &local)?
        }
    };
    let deg = orbidegree(&bundle);
    if !crate::orbifold::is_contractible(&bundle) {
        return Err(ClassifyError::NonNegativeDegree(deg.to_string()));
    }
    log.push("orbibundle", "contractible orbibundles", format!("degree {deg} < 0"));
    let period = central.period.unwrap_or(1);
    if period == 0 {
        return Err(ClassifyError::CoverDegree(0));
    }
    Ok(Classification {
        variant: Variant::WeightedHomogeneous {
            euler_characteristic: crate::orbifold::euler_characteristic(&base).to_string(),
            base,
            geometry,
            orbidegree: deg.to_string(),
            bundle,
            period,
            legs: folded,
        },
        provenance: log.0,
        residuals: BTreeMap::new(),
    })
}

/// Class of the compact orbit space `S(f)`; always non-Kähler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitSurfaceClass {
    /// `κ = −∞`
    Hopf,
    /// `κ = 0`
    Kodaira,
    /// `κ = 1`, a quotient of a properly elliptic surface.
    ProperlyEllipticQuotient,
}

impl OrbitSurfaceClass {
    /// `None` stands for `−∞`.
    pub fn kodaira_dimension(self) -> Option<u8> {
        match self {
            OrbitSurfaceClass::Hopf => None,
            OrbitSurfaceClass::Kodaira => Some(0),
            OrbitSurfaceClass::ProperlyEllipticQuotient => Some(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitSurfaceVerdict {
    pub class: OrbitSurfaceClass,
    pub kodaira_dimension: String,
    pub kahler: bool,
    /// Smooth cover of the base used to read off `κ` (weighted homogeneous case).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_cover: Option<crate::orbifold::CoverData>,
    /// `S(f^N) → S(f)`, for the period `N`.
    pub covering: CoveringRelation,
}

/// A cyclic unramified cover `S(f^N) → S(f)` of degree `N`: same class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringRelation {
    pub degree: u64,
    pub class: OrbitSurfaceClass,
    pub note: String,
}

pub fn cyclic_cover_degree(class: OrbitSurfaceClass, n: i64) -> Result<CoveringRelation, ClassifyError> {
    if n < 1 {
        return Err(ClassifyError::CoverDegree(n));
    }
    let note = if n == 1 {
        "identity".to_string()
    } else {
        format!("degree {n} cyclic cover, class and Kodaira dimension preserved")
    };
    Ok(CoveringRelation { degree: n as u64, class, note })
}

/// The decision table: cyclic quotients give Hopf surfaces; otherwise the
/// geometry of the base orbifold decides.
pub fn classify_orbit_surface(v: &Variant) -> Result<OrbitSurfaceVerdict, ClassifyError> {
    let (class, base_cover, period) = match v {
        Variant::CyclicQuotient { .. } => (OrbitSurfaceClass::Hopf, None, 1),
        Variant::WeightedHomogeneous { base, geometry, period, .. } => {
            let class = match geometry {
                Geometry::Bad => {
                    return Err(ClassifyError::Inconsistent("bad orbifold base after classification".into()))
                }
                Geometry::Spherical => OrbitSurfaceClass::Hopf,
                Geometry::Euclidean => OrbitSurfaceClass::Kodaira,
                Geometry::Hyperbolic => OrbitSurfaceClass::ProperlyEllipticQuotient,
            };
            let nn = canonical_cover_degree(base)?;
            (class, Some(smooth_cover_data(base, nn)?), *period)
        }
    };
    let kodaira_dimension = class.kodaira_dimension().map_or("-inf".to_string(), |k| k.to_string());
    Ok(OrbitSurfaceVerdict {
        class,
        kodaira_dimension,
        kahler: false,
        base_cover,
        covering: cyclic_cover_degree(class, period as i64)?,
    })
}

/// The JSON report written by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub classification: Variant,
    pub orbit_surface: OrbitSurfaceVerdict,
    pub provenance: Vec<ProvenanceEntry>,
    pub residuals: BTreeMap<String, f64>,
}

pub fn report(doc: &AdmissibleDataDocument, opts: &ClassifyOptions) -> Result<Report, ClassifyError> {
    let c = classify_singularity(doc, opts)?;
    let orbit_surface = classify_orbit_surface(&c.variant)?;
    let mut provenance = c.provenance;
    provenance.push(ProvenanceEntry {
        step: "orbit_surface".into(),
        theorem: "orbit surface table".into(),
        quote: format!("{:?}, Kodaira dimension {}", orbit_surface.class, orbit_surface.kodaira_dimension),
    });
    Ok(Report { classification: c.variant, orbit_surface, provenance, residuals: c.residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::codec::JetDocument;
    use crate::algebra::jet::Jet;
    use crate::graph::{DynamicsAnnotation, Vertex};

    pub(crate) fn star(center_genus: u32, center_self: i64, leg_chains: &[&[i64]]) -> DualGraph {
        let mut vertices = vec![Vertex { id: 0, genus: center_genus, self_intersection: center_self, a: None }];
        let mut edges = Vec::new();
        let mut next = 1;
        for chain in leg_chains {
            let mut prev = 0;
            for &b in *chain {
                vertices.push(Vertex::rational(next, -b));
                edges.push([prev, next]);
                prev = next;
                next += 1;
            }
        }
        DualGraph::new(vertices, edges)
    }

    fn run(doc: &AdmissibleDataDocument) -> Result<Classification, ClassifyError> {
        classify_singularity(doc, &ClassifyOptions::default())
    }

    #[test]
    fn chain_with_diagonal_germ() {
        let f = Jet::from_terms(
            2,
            4,
            vec![(0, vec![1, 0], Cyclotomic::from_ratio(1, 2)), (1, vec![0, 1], Cyclotomic::from_ratio(1, 3))],
        )
        .unwrap();
        let mut doc = AdmissibleDataDocument::from_graph(DualGraph::chain(&[-3, -2]));
        doc.germ = Some(GermDocument {
            jet: JetDocument::from_jet(&f),
            group: Some(DiagonalGroup::cyclic_quotient(5, 2).unwrap()),
            k_twist: Some(1),
        });
        let c = run(&doc).unwrap();
        let Variant::CyclicQuotient { m, q, case, chain, germ, .. } = &c.variant else { panic!() };
        assert_eq!((*m, *q, *case), (5, 2, HjCase::B));
        assert_eq!(chain, &vec![3, 2]);
        assert_eq!(germ.as_ref().unwrap().form, "diagonal_pair");
        assert_eq!(c.residuals["conjugacy"], 0.0);
        assert_eq!(classify_orbit_surface(&c.variant).unwrap().class, OrbitSurfaceClass::Hopf);
        // the reversed chain reads (5, 3); the group pins the orientation
        doc.graph = DualGraph::chain(&[-2, -3]);
        let Variant::CyclicQuotient { q, chain, .. } = run(&doc).unwrap().variant else { panic!() };
        assert_eq!((q, chain), (2, vec![3, 2]));
    }

    #[test]
    fn star_genus_two() {
        let mut doc = AdmissibleDataDocument::from_graph(star(2, -2, &[&[2], &[2], &[2]]));
        doc.central = Some(CentralData { finite_order: true, period: Some(4), bundle: None });
        let c = run(&doc).unwrap();
        let Variant::WeightedHomogeneous { base, geometry, period, orbidegree, .. } = &c.variant else { panic!() };
        assert_eq!((base.genus(), base.marks()), (2, &[2, 2, 2][..]));
        assert_eq!(*geometry, Geometry::Hyperbolic);
        assert_eq!(*period, 4);
        assert_eq!(orbidegree, "-1/2");
        let v = classify_orbit_surface(&c.variant).unwrap();
        assert_eq!(v.class, OrbitSurfaceClass::ProperlyEllipticQuotient);
        assert_eq!(v.covering.degree, 4);
        // infinite order on a curve of positive genus is impossible
        doc.central = None;
        assert!(matches!(run(&doc), Err(ClassifyError::CentralComponent(_))));
    }

    #[test]
    fn decision_rows() {
        let cases: [(DualGraph, OrbitSurfaceClass); 3] = [
            (star(0, -2, &[&[2], &[2], &[2]]), OrbitSurfaceClass::Hopf),
            (star(0, -2, &[&[2], &[3], &[6]]), OrbitSurfaceClass::Kodaira),
            (star(0, -1, &[&[2], &[3], &[7]]), OrbitSurfaceClass::ProperlyEllipticQuotient),
        ];
        for (g, class) in cases {
            let r = report(&AdmissibleDataDocument::from_graph(g), &ClassifyOptions::default()).unwrap();
            assert_eq!(r.orbit_surface.class, class);
        }
        let mut torus = AdmissibleDataDocument::from_graph(star(1, -1, &[]));
        torus.central = Some(CentralData { finite_order: true, ..Default::default() });
        let r = report(&torus, &ClassifyOptions::default()).unwrap();
        assert_eq!(r.orbit_surface.class, OrbitSurfaceClass::Kodaira);
    }

    #[test]
    fn error_paths() {
        let mut cyc = DualGraph::chain(&[-3, -3, -3]);
        cyc.edges.push([0, 2]);
        assert!(matches!(run(&AdmissibleDataDocument::from_graph(cyc)), Err(ClassifyError::CycleExcluded { .. })));
        let mut h = star(0, -3, &[&[3], &[2], &[2]]);
        h.vertices.extend([Vertex::rational(10, -2), Vertex::rational(11, -2)]);
        h.edges.extend([[1, 10], [1, 11]]);
        assert_eq!(run(&AdmissibleDataDocument::from_graph(h)), Err(ClassifyError::TwoBranchPoints));
        let bad = DualGraph::chain(&[-1, -2, -1]);
        assert!(matches!(
            run(&AdmissibleDataDocument::from_graph(bad)),
            Err(ClassifyError::Graph(GraphError::NotContractible))
        ));
        // star with degree ≥ 0: center −1 with three (−2) legs is not negative definite
        let nd = star(0, -1, &[&[2], &[2], &[2]]);
        assert!(run(&AdmissibleDataDocument::from_graph(nd)).is_err());
    }

    #[test]
    fn explicit_bundle_must_be_negative() {
        let mut doc = AdmissibleDataDocument::from_graph(star(0, -2, &[&[2], &[2], &[2]]));
        doc.central = Some(CentralData {
            bundle: Some(BundleDocument { e: 0, local: vec![[2, 1], [2, 1], [2, 1]] }),
            ..Default::default()
        });
        assert_eq!(run(&doc), Err(ClassifyError::NonNegativeDegree("3/2".into())));
    }

    #[test]
    fn chain_with_center_reroutes() {
        let mut g = DualGraph::chain(&[-2, -3, -4]);
        g.dynamics = Some(DynamicsAnnotation { center: Some(1), corners: vec![] });
        let c = run(&AdmissibleDataDocument::from_graph(g.clone())).unwrap();
        assert!(c.provenance.iter().any(|p| p.step == "reroute" && p.quote.contains("Bad")));
        let Variant::CyclicQuotient { m, chain, .. } = c.variant else { panic!() };
        assert_eq!(hj_fold(&chain).unwrap().m, m);
        // same singularity without the center annotation
        g.dynamics = None;
        let Variant::CyclicQuotient { m: m2, .. } = run(&AdmissibleDataDocument::from_graph(g)).unwrap().variant else {
            panic!()
        };
        assert_eq!(m, m2);
    }

    #[test]
    fn relabeling_and_leg_order() {
        let a = run(&AdmissibleDataDocument::from_graph(star(0, -1, &[&[2], &[3], &[7]]))).unwrap();
        let b = run(&AdmissibleDataDocument::from_graph(star(0, -1, &[&[7], &[2], &[3]]).relabeled(|i| 100 - i))).unwrap();
        assert_eq!(a.variant, b.variant);
        let c = run(&AdmissibleDataDocument::from_graph(DualGraph::chain(&[-2, -5, -3]))).unwrap();
        let d = run(&AdmissibleDataDocument::from_graph(DualGraph::chain(&[-2, -5, -3]).relabeled(|i| -i))).unwrap();
        assert_eq!(c.variant, d.variant);
    }

    #[test]
    fn cover_records() {
        assert_eq!(cyclic_cover_degree(OrbitSurfaceClass::Hopf, 1).unwrap().note, "identity");
        assert_eq!(cyclic_cover_degree(OrbitSurfaceClass::Hopf, 3).unwrap().class, OrbitSurfaceClass::Hopf);
        assert_eq!(cyclic_cover_degree(OrbitSurfaceClass::Kodaira, 2).unwrap().degree, 2);
        assert_eq!(cyclic_cover_degree(OrbitSurfaceClass::Kodaira, 0), Err(ClassifyError::CoverDegree(0)));
    }
}
