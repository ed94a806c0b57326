use serde::Serialize;

use crate::error::GraphError;
use crate::graph::document::DualGraph;
use crate::graph::matrix::{intersection_matrix, is_negative_definite};

/// Outcome of contracting one curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowDown {
    pub graph: DualGraph,
    /// `false` when the contraction created a loop or a repeated edge.
    pub snc: bool,
}

/// Contracts the smooth rational `(−1)`-curve `v`.
///
/// Each neighbour `A` meeting `v` in `m_A` points gains `m_A²` in
/// self-intersection; two distinct neighbours `A`, `B` gain `m_A·m_B` new
/// intersection points; a neighbour meeting `v` twice or more acquires
/// `C(m_A, 2)` nodes (loops).
pub fn blow_down(g: &DualGraph, v: i64) -> Result<BlowDown, GraphError> {
    let idx = g.index_of(v)?;
    let vert = &g.vertices[idx];
    if vert.genus != 0 || vert.self_intersection != -1 {
        return Err(GraphError::NotExceptional(v));
    }
    let mut mult: Vec<(i64, usize)> = Vec::new();
    for [a, b] in &g.edges {
        let other = match (*a == v, *b == v) {
            (true, true) => return Err(GraphError::NotExceptional(v)),
            (true, false) => *b,
            (false, true) => *a,
            (false, false) => continue,
        };
        match mult.iter_mut().find(|(id, _)| *id == other) {
            Some((_, m)) => *m += 1,
            None => mult.push((other, 1)),
        }
    }
    mult.sort_unstable();
    let mut out = g.clone();
    out.vertices.remove(idx);
    out.edges.retain(|[a, b]| *a != v && *b != v);
    for (id, m) in &mult {
        let m = *m as i64;
        let i = out.index_of(*id)?;
        out.vertices[i].self_intersection += m * m;
        for _ in 0..m * (m - 1) / 2 {
            out.edges.push([*id, *id]);
        }
    }
    for (x, (a, ma)) in mult.iter().enumerate() {
        for (b, mb) in &mult[x + 1..] {
            for _ in 0..ma * mb {
                out.edges.push([*a, *b]);
            }
        }
    }
    if let Some(d) = &mut out.dynamics {
        d.corners.retain(|c| !c.edge.contains(&v));
        if d.center == Some(v) {
            d.center = None;
        }
    }
    let snc = out.is_snc();
    Ok(BlowDown { graph: out, snc })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalModel {
    pub graph: DualGraph,
    /// Contracted vertex ids, in order.
    pub contracted: Vec<i64>,
}

/// Blows down rational `(−1)`-curves of degree ≤ 2 (lowest id first) until
/// none is left, re-checking negative definiteness after every step.
pub fn minimal_negative_model(g: &DualGraph) -> Result<MinimalModel, GraphError> {
    g.validate()?;
    if !is_negative_definite(&intersection_matrix(g)) {
        return Err(GraphError::NotContractible);
    }
    let mut cur = g.clone();
    let mut contracted = Vec::new();
    loop {
        let degrees = cur.degrees();
        let next = cur
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, v)| v.genus == 0 && v.self_intersection == -1 && degrees[*i] <= 2)
            .map(|(_, v)| v.id)
            .min();
        let Some(v) = next else { break };
        let step = blow_down(&cur, v)?;
        if !step.snc {
            return Err(GraphError::SncExit(v));
        }
        if !is_negative_definite(&intersection_matrix(&step.graph)) {
            return Err(GraphError::NotContractible);
        }
        contracted.push(v);
        cur = step.graph;
    }
    Ok(MinimalModel { graph: cur, contracted })
}
