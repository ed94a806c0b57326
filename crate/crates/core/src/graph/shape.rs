use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::document::DualGraph;

/// Combinatorial type of a connected dual graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// A segment, including a single vertex and the empty graph.
    Chain,
    /// A circle (a loop or a double edge count as circles of length 1, 2).
    Cycle,
    /// A tree with exactly one vertex of degree ≥ 3.
    StarShaped { center: i64 },
    /// A tree with two or more branch vertices.
    GeneralTree,
    Other,
}

impl Shape {
    /// Segments count as star-shaped.
    pub fn is_star_shaped(self) -> bool {
        matches!(self, Shape::Chain | Shape::StarShaped { .. })
    }
}

pub fn shape(g: &DualGraph) -> Shape {
    if g.is_empty() {
        return Shape::Chain;
    }
    if !g.is_connected() {
        return Shape::Other;
    }
    let degrees = g.degrees();
    if g.edges.len() + 1 == g.len() {
        // connected with |E| = |V| − 1 forces a simple tree
        let branch: Vec<usize> = (0..g.len()).filter(|&i| degrees[i] >= 3).collect();
        return match branch.as_slice() {
            [] => Shape::Chain,
            [c] => Shape::StarShaped { center: g.vertices[*c].id },
            _ => Shape::GeneralTree,
        };
    }
    if g.edges.len() == g.len() && degrees.iter().all(|&d| d == 2) {
        return Shape::Cycle;
    }
    Shape::Other
}

/// Vertex ids of a chain from one end to the other; the end with the
/// smaller id comes first.
pub fn chain_order(g: &DualGraph) -> Result<Vec<i64>, GraphError> {
    if shape(g) != Shape::Chain {
        return Err(GraphError::Invalid("graph is not a chain".into()));
    }
    if g.is_empty() {
        return Ok(Vec::new());
    }
    let adj = g.adjacency();
    let ends: Vec<usize> = (0..g.len()).filter(|&i| adj[i].len() <= 1).collect();
    let start = *ends.iter().min_by_key(|&&i| g.vertices[i].id).expect("a chain has ends");
    let mut order = vec![start];
    let mut prev = None;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&j| Some(j) != prev) {
        order.push(next);
        prev = Some(cur);
        cur = next;
    }
    Ok(order.into_iter().map(|i| g.vertices[i].id).collect())
}

/// The branches of a tree at `center`, each listed from the vertex adjacent
/// to the center outward. Fails when a branch is not a chain.
pub fn legs(g: &DualGraph, center: i64) -> Result<Vec<Vec<i64>>, GraphError> {
    if !g.is_tree() {
        return Err(GraphError::Invalid("legs are only defined on trees".into()));
    }
    let c = g.index_of(center)?;
    let adj = g.adjacency();
    let mut out = Vec::new();
    for &start in &adj[c] {
        let mut leg = vec![start];
        let mut prev = c;
        let mut cur = start;
        loop {
            let next: Vec<usize> = adj[cur].iter().copied().filter(|&j| j != prev).collect();
            match next.as_slice() {
                [] => break,
                [n] => {
                    leg.push(*n);
                    prev = cur;
                    cur = *n;
                }
                _ => return Err(GraphError::Invalid(format!("vertex {} branches off the center", g.vertices[cur].id))),
            }
        }
        out.push(leg.into_iter().map(|i| g.vertices[i].id).collect());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::document::Vertex;

    fn star(legs: &[usize]) -> DualGraph {
        let mut vertices = vec![Vertex::rational(0, -2)];
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                vertices.push(Vertex::rational(next, -2));
                edges.push([prev, next]);
                prev = next;
                next += 1;
            }
        }
        DualGraph::new(vertices, edges)
    }

    #[test]
    fn documented_shapes() {
        let path = DualGraph::chain(&[-2, -2, -2]);
        assert_eq!(shape(&path), Shape::Chain);
        assert!(shape(&path).is_star_shaped());
        assert_eq!(shape(&star(&[1, 1, 1])), Shape::StarShaped { center: 0 });
        let mut h = star(&[1, 1, 1]);
        h.vertices.extend([Vertex::rational(10, -2), Vertex::rational(11, -2)]);
        h.edges.extend([[1, 10], [1, 11]]);
        assert_eq!(shape(&h), Shape::GeneralTree);
        let mut cycle = DualGraph::chain(&[-2, -2, -2]);
        cycle.edges.push([0, 2]);
        assert_eq!(shape(&cycle), Shape::Cycle);
        assert_eq!(shape(&DualGraph::chain(&[-3])), Shape::Chain);
        assert_eq!(shape(&DualGraph::default()), Shape::Chain);
        let mut nodal = DualGraph::chain(&[1]);
        nodal.edges.push([0, 0]);
        assert_eq!(shape(&nodal), Shape::Cycle);
    }

    #[test]
    fn chain_and_leg_orders() {
        let g = DualGraph::chain(&[-2, -3, -4]).relabeled(|id| 10 - id);
        assert_eq!(chain_order(&g).unwrap(), vec![8, 9, 10]);
        let s = star(&[2, 1, 3]);
        let legs = legs(&s, 0).unwrap();
        assert_eq!(legs, vec![vec![1, 2], vec![3], vec![4, 5, 6]]);
    }
}
