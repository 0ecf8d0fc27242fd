//! Finite simple undirected graphs.

use std::collections::VecDeque;

use petgraph::graph::UnGraph;
use petgraph::graph6::{FromGraph6, ToGraph6};
use serde::Serialize;
use thiserror::Error;

use crate::partition::Partition;
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("empty vertex selection")]
    EmptySelection,
    #[error("malformed graph6 string: {0}")]
    Graph6(String),
}

/// Simple undirected graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UGraph {
    adj: Vec<Vec<u32>>,
}

/// How a graph compares with the degenerate quotient shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "length", rename_all = "kebab-case")]
pub enum DegeneracyClass {
    K1,
    K2,
    /// Connected 2-regular graph on `r ≥ 3` vertices.
    Cycle(usize),
    NonDegenerate,
}

impl DegeneracyClass {
    pub fn is_degenerate(self) -> bool {
        self != DegeneracyClass::NonDegenerate
    }

    pub fn cycle_length(self) -> Option<usize> {
        match self {
            DegeneracyClass::Cycle(r) => Some(r),
            _ => None,
        }
    }
}

impl UGraph {
    /// Builds a graph, dropping repeated edges.
    pub fn build(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(UGraph { adj })
    }

    pub fn empty(vertex_count: usize) -> Self {
        UGraph {
            adj: vec![Vec::new(); vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().iter().all(|&c| c == 0)
    }

    /// Component index of each vertex, numbered by least vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v as usize] == usize::MAX {
                        label[v as usize] = next;
                        queue.push_back(v as usize);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.adj.iter().all(|l| l.len() == k)
    }

    /// A proper 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let n = self.vertex_count();
        let mut colour = vec![u8::MAX; n];
        for s in 0..n {
            if colour[s] != u8::MAX {
                continue;
            }
            colour[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    let v = v as usize;
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        queue.push_back(v);
                    } else if colour[v] == colour[u] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn classify_degenerate(&self) -> DegeneracyClass {
        match self.vertex_count() {
            1 => DegeneracyClass::K1,
            2 if self.has_edge(0, 1) => DegeneracyClass::K2,
            n if n >= 3 && self.is_regular(2) && self.is_connected() => DegeneracyClass::Cycle(n),
            _ => DegeneracyClass::NonDegenerate,
        }
    }

    /// Quotient on the cells of `p`: cells are adjacent when some edge joins
    /// them. Edges inside a cell are dropped.
    pub fn quotient(&self, p: &Partition) -> UGraph {
        self.quotient_with_diagnostics(p).0
    }

    /// Like [`UGraph::quotient`], also reporting whether any edge lay inside a cell.
    pub fn quotient_with_diagnostics(&self, p: &Partition) -> (UGraph, bool) {
        assert_eq!(p.size(), self.vertex_count(), "partition must cover the vertices");
        let mut adj = vec![Vec::new(); p.cell_count()];
        let mut internal = false;
        for (u, v) in self.edges() {
            let (a, b) = (p.cell_of(u), p.cell_of(v));
            if a == b {
                internal = true;
            } else {
                adj[a].push(b as u32);
                adj[b].push(a as u32);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        (UGraph { adj }, internal)
    }

    /// Vertex `x` on sheet `δ` is numbered `δ·n + x`; `x_δ ~ y_δ'` iff
    /// `δ ≠ δ'` and `x ~ y`.
    pub fn standard_double_cover(&self) -> UGraph {
        let n = self.vertex_count();
        let mut adj = vec![Vec::new(); 2 * n];
        for (x, list) in self.adj.iter().enumerate() {
            adj[x] = list.iter().map(|&y| y + n as u32).collect();
            adj[x + n] = list.clone();
        }
        UGraph { adj }
    }

    /// Subgraph induced on `keep`, with vertices renumbered in increasing
    /// order. The second value maps old vertex ids to new ones.
    pub fn induced(&self, keep: &[usize]) -> Result<(UGraph, Vec<Option<usize>>), GraphError> {
        if keep.is_empty() {
            return Err(GraphError::EmptySelection);
        }
        let n = self.vertex_count();
        let mut map = vec![None; n];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            if old >= n {
                return Err(GraphError::VertexOutOfRange { vertex: old, count: n });
            }
            map[old] = Some(new);
        }
        let adj = sorted
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter_map(|&v| map[v as usize].map(|w| w as u32))
                    .collect()
            })
            .collect();
        Ok((UGraph { adj }, map))
    }

    /// True when `g` maps every edge to an edge.
    pub fn is_automorphism(&self, g: &Permutation) -> bool {
        g.degree() == self.vertex_count()
            && self.edges().all(|(u, v)| self.has_edge(g.apply(u), g.apply(v)))
    }

    pub fn to_graph6(&self) -> String {
        let mut g = UnGraph::<(), ()>::with_capacity(self.vertex_count(), self.edge_count());
        let nodes: Vec<_> = (0..self.vertex_count()).map(|_| g.add_node(())).collect();
        for (u, v) in self.edges() {
            g.add_edge(nodes[u], nodes[v], ());
        }
        g.graph6_string()
    }

    pub fn from_graph6(text: &str) -> Result<Self, GraphError> {
        let text = text.trim_end_matches(['\n', '\r']);
        let bytes = text.as_bytes();
        if bytes.is_empty() {
            return Err(GraphError::Graph6("empty input".into()));
        }
        if let Some(b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
            return Err(GraphError::Graph6(format!("byte {b} outside 63..=126")));
        }
        let (n, body) = if bytes[0] == 126 {
            if bytes.len() < 4 || bytes[1] == 126 {
                return Err(GraphError::Graph6("unsupported order header".into()));
            }
            let n = bytes[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &bytes[4..])
        } else {
            ((bytes[0] - 63) as usize, &bytes[1..])
        };
        let bits = n * n.saturating_sub(1) / 2;
        if body.len() != bits.div_ceil(6) {
            return Err(GraphError::Graph6(format!(
                "expected {} data bytes for {n} vertices, found {}",
                bits.div_ceil(6),
                body.len()
            )));
        }
        if n < 2 {
            return Ok(UGraph::empty(n));
        }
        let g = UnGraph::<(), ()>::from_graph6_string(text.to_string());
        let edges: Vec<(usize, usize)> = g
            .raw_edges()
            .iter()
            .map(|e| (e.source().index(), e.target().index()))
            .collect();
        UGraph::build(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> UGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        UGraph::build(n, &edges).unwrap()
    }

    #[test]
    fn small_builds() {
        let k1 = UGraph::build(1, &[]).unwrap();
        assert_eq!(k1.classify_degenerate(), DegeneracyClass::K1);
        assert!(k1.is_connected());
        let k2 = UGraph::build(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(k2.edge_count(), 1);
        assert_eq!(k2.classify_degenerate(), DegeneracyClass::K2);
        let c4 = cycle(4);
        assert!(c4.is_regular(2));
        assert_eq!(c4.classify_degenerate(), DegeneracyClass::Cycle(4));
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert_eq!(UGraph::build(3, &[(1, 1)]), Err(GraphError::Loop(1)));
        assert_eq!(
            UGraph::build(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, count: 3 })
        );
    }

    #[test]
    fn classify_edge_cases() {
        assert_eq!(cycle(7).classify_degenerate(), DegeneracyClass::Cycle(7));
        assert_eq!(UGraph::empty(2).classify_degenerate(), DegeneracyClass::NonDegenerate);
        // Two disjoint triangles are 2-regular but not a cycle.
        let two = UGraph::build(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert_eq!(two.classify_degenerate(), DegeneracyClass::NonDegenerate);
    }

    #[test]
    fn quotient_basics() {
        let c6 = cycle(6);
        assert_eq!(c6.quotient(&Partition::singletons(6)), c6);
        let k2 = UGraph::build(2, &[(0, 1)]).unwrap();
        let (q, internal) = k2.quotient_with_diagnostics(&Partition::whole(2));
        assert_eq!(q.classify_degenerate(), DegeneracyClass::K1);
        assert!(internal);
        // Opposite vertices of C6 collapse to a triangle.
        let p = Partition::from_labels(&[0, 1, 2, 0, 1, 2]);
        assert_eq!(c6.quotient(&p).classify_degenerate(), DegeneracyClass::Cycle(3));
    }

    #[test]
    fn double_covers() {
        let k2 = UGraph::build(2, &[(0, 1)]).unwrap();
        let d = k2.standard_double_cover();
        assert_eq!(d.vertex_count(), 4);
        assert_eq!(d.edge_count(), 2);
        assert!(!d.is_connected());
        let c3 = cycle(3).standard_double_cover();
        assert_eq!(c3.classify_degenerate(), DegeneracyClass::Cycle(6));
        assert!(c3.is_bipartite());
    }

    #[test]
    fn induced_subgraphs() {
        let c5 = cycle(5);
        let (all, map) = c5.induced(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all, c5);
        assert_eq!(map[3], Some(3));
        let (one, _) = c5.induced(&[2]).unwrap();
        assert_eq!(one.classify_degenerate(), DegeneracyClass::K1);
        let (path, map) = c5.induced(&[4, 0, 1]).unwrap();
        assert_eq!(path.edge_count(), 2);
        assert_eq!(map[4], Some(2));
        assert_eq!(map[2], None);
        assert_eq!(c5.induced(&[]), Err(GraphError::EmptySelection));
    }

    #[test]
    fn graph6_known_strings() {
        // Reference encodings from the graph6 format description.
        let k4 = UGraph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(k4.to_graph6(), "C~");
        let p = UGraph::build(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(p.to_graph6(), "DQc");
        assert_eq!(UGraph::from_graph6("DQc").unwrap(), p);
        assert_eq!(UGraph::from_graph6("@").unwrap(), UGraph::empty(1));
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(UGraph::from_graph6("").is_err());
        assert!(UGraph::from_graph6("D").is_err());
        assert!(UGraph::from_graph6("DQc!").is_err());
        assert!(UGraph::from_graph6("~~").is_err());
    }

    #[test]
    fn graph6_long_header_round_trip() {
        let c = cycle(70);
        let s = c.to_graph6();
        assert!(s.starts_with('~'));
        assert_eq!(UGraph::from_graph6(&s).unwrap(), c);
    }
}
