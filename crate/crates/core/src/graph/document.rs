//! The weighted dual graph of a resolution, as read from JSON.
//!
//! ```json
//! {"vertices": [{"id": 0, "genus": 0, "self": -2, "a": 1}],
//!  "edges": [[0, 1]],
//!  "dynamics": {"center": 0, "corners": [{"edge": [0, 1], "mod_lambda": "1/2", "mod_mu": "1/3"}]}}
//! ```

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: i64,
    pub genus: u32,
    #[serde(rename = "self")]
    pub self_intersection: i64,
    /// Vanishing order of the maximal ideal along the curve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<u32>,
}

impl Vertex {
    pub fn rational(id: i64, self_intersection: i64) -> Self {
        Vertex { id, genus: 0, self_intersection, a: None }
    }
}

/// Moduli of the two eigenvalues at the corner `edge = [E, E′]`:
/// `mod_lambda` along `E`, `mod_mu` along `E′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerAnnotation {
    pub edge: [i64; 2],
    pub mod_lambda: String,
    pub mod_mu: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsAnnotation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<i64>,
    #[serde(default)]
    pub corners: Vec<CornerAnnotation>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsAnnotation>,
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<[i64; 2]>) -> Self {
        DualGraph { vertices, edges, dynamics: None }
    }

    /// Chain of rational curves with self-intersections `selfs`, ids `0..n`.
    pub fn chain(selfs: &[i64]) -> Self {
        let vertices = selfs.iter().enumerate().map(|(i, &s)| Vertex::rational(i as i64, s)).collect();
        let edges = (1..selfs.len()).map(|i| [i as i64 - 1, i as i64]).collect();
        DualGraph::new(vertices, edges)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, id: i64) -> Result<usize, GraphError> {
        self.vertices.iter().position(|v| v.id == id).ok_or(GraphError::UnknownVertex(id))
    }

    pub fn vertex(&self, id: i64) -> Result<&Vertex, GraphError> {
        self.index_of(id).map(|i| &self.vertices[i])
    }

    /// Ids unique, edges between known vertices, `a ≥ 1`, connected.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut seen = HashMap::new();
        for v in &self.vertices {
            if seen.insert(v.id, ()).is_some() {
                return Err(GraphError::Invalid(format!("duplicate vertex id {}", v.id)));
            }
            if v.a == Some(0) {
                return Err(GraphError::Invalid(format!("vanishing order of vertex {} must be ≥ 1", v.id)));
            }
        }
        for e in &self.edges {
            for id in e {
                if !seen.contains_key(id) {
                    return Err(GraphError::UnknownVertex(*id));
                }
            }
        }
        if !self.is_connected() {
            return Err(GraphError::NotConnected);
        }
        Ok(())
    }

    /// Edge counts between vertex indices; loops are stored at `(i, i)`.
    pub fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let index: HashMap<i64, usize> = self.vertices.iter().enumerate().map(|(i, v)| (v.id, i)).collect();
        let mut out = BTreeMap::new();
        for [a, b] in &self.edges {
            let (i, j) = (index[a], index[b]);
            *out.entry((i.min(j), i.max(j))).or_insert(0) += 1;
        }
        out
    }

    /// Adjacency by index, one entry per edge (loops appear twice).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for ((i, j), count) in self.multiplicities() {
            for _ in 0..count {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency().iter().map(Vec::len).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// No loops and no repeated edges.
    pub fn is_snc(&self) -> bool {
        self.multiplicities().into_iter().all(|((i, j), c)| i != j && c == 1)
    }

    /// Connected, simple, `|E| = |V| − 1`.
    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.is_snc() && self.edges.len() + 1 == self.len()
    }

    /// Breadth-first distances from vertex index `from`.
    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.len()];
        dist[from] = Some(0);
        let mut queue = VecDeque::from([from]);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if dist[j].is_none() {
                    dist[j] = Some(dist[i].expect("visited") + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    /// Copy with vertex ids replaced by `map(id)`.
    pub fn relabeled(&self, map: impl Fn(i64) -> i64) -> Self {
        let vertices = self.vertices.iter().map(|v| Vertex { id: map(v.id), ..v.clone() }).collect();
        let edges = self.edges.iter().map(|[a, b]| [map(*a), map(*b)]).collect();
        let dynamics = self.dynamics.as_ref().map(|d| DynamicsAnnotation {
            center: d.center.map(&map),
            corners: d
                .corners
                .iter()
                .map(|c| CornerAnnotation { edge: [map(c.edge[0]), map(c.edge[1])], ..c.clone() })
                .collect(),
        });
        DualGraph { vertices, edges, dynamics }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_names() {
        let text = r#"{"vertices":[{"id":3,"genus":1,"self":-2,"a":2},{"id":5,"genus":0,"self":-3}],
                       "edges":[[3,5]],
                       "dynamics":{"center":3,"corners":[{"edge":[3,5],"mod_lambda":"1","mod_mu":"1/2"}]}}"#;
        let g: DualGraph = serde_json::from_str(text).unwrap();
        assert_eq!(g.vertices[0].self_intersection, -2);
        assert_eq!(g.vertices[0].a, Some(2));
        assert_eq!(g.vertices[1].a, None);
        assert_eq!(g.dynamics.as_ref().unwrap().center, Some(3));
        g.validate().unwrap();
        let back = serde_json::to_value(&g).unwrap();
        assert_eq!(back["vertices"][0]["self"], -2);
        assert!(back["vertices"][1].get("a").is_none());
    }

    #[test]
    fn validation_errors() {
        let dup = DualGraph::new(vec![Vertex::rational(1, -2), Vertex::rational(1, -2)], vec![]);
        assert!(matches!(dup.validate(), Err(GraphError::Invalid(_))));
        let unknown = DualGraph::new(vec![Vertex::rational(1, -2)], vec![[1, 2]]);
        assert_eq!(unknown.validate(), Err(GraphError::UnknownVertex(2)));
        let split = DualGraph::new(vec![Vertex::rational(1, -2), Vertex::rational(2, -2)], vec![]);
        assert_eq!(split.validate(), Err(GraphError::NotConnected));
    }

    #[test]
    fn snc_and_tree_flags() {
        let chain = DualGraph::chain(&[-2, -2, -2]);
        assert!(chain.is_snc() && chain.is_tree());
        let mut doubled = chain.clone();
        doubled.edges.push([0, 1]);
        assert!(!doubled.is_snc() && !doubled.is_tree());
        let mut looped = chain;
        looped.edges.push([2, 2]);
        assert!(!looped.is_snc());
        assert_eq!(looped.degrees(), vec![1, 2, 3]);
    }
}
