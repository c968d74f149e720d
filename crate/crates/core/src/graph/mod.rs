//! Weighted undirected multigraphs with a fixed edge orientation, plus the
//! combinatorial measurements used throughout the crate.

mod conductance;
pub mod families;
mod generate;
mod io;

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub use conductance::{
    conductance_bounds, conductance_exact, conductance_exact_with_limit, CertificateKind,
    ConductanceCertificate, DEFAULT_ENUMERATION_LIMIT,
};
pub use generate::{
    gadget_subdivide, gen_random_regular, graph_union, weighted_to_multigraph, DEFAULT_EDGE_CAP,
};
pub use io::{read_graph, write_graph};

/// An edge stored as `(tail, head, weight)`; the orientation is arbitrary but fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(tail: usize, head: usize, weight: f64) -> Self {
        Edge { tail, head, weight }
    }

    pub fn unit(tail: usize, head: usize) -> Self {
        Edge::new(tail, head, 1.0)
    }

    /// Endpoint pair with the smaller id first.
    pub fn key(&self) -> (usize, usize) {
        if self.tail < self.head {
            (self.tail, self.head)
        } else {
            (self.head, self.tail)
        }
    }
}

/// Weighted multigraph. Weights are at least 1, there are no self-loops, and
/// parallel edges are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= n || e.head >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} ({}, {}) has an endpoint outside [0, {n})",
                    e.tail, e.head
                )));
            }
            if e.tail == e.head {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} is a self-loop at {}",
                    e.tail
                )));
            }
            if !e.weight.is_finite() || e.weight < 1.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} has weight {} (weights must be finite and >= 1)",
                    e.weight
                )));
            }
        }
        Ok(Multigraph { n, edges })
    }

    pub fn from_unit_edges(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(a, b)| Edge::unit(a, b)).collect())
    }

    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Multigraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    /// `(tail, head, weight)` triples in edge order.
    pub fn edge_triples(&self) -> Vec<(usize, usize, f64)> {
        self.edges
            .iter()
            .map(|e| (e.tail, e.head, e.weight))
            .collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Copy of the graph with every weight reset to 1.
    pub fn with_unit_weights(&self) -> Self {
        Multigraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge::unit(e.tail, e.head))
                .collect(),
        }
    }

    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.tail] += e.weight;
            deg[e.head] += e.weight;
        }
        deg
    }

    /// Number of incident edge endpoints per vertex (parallel edges counted).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    /// `vol(V) = 2 * total weight`.
    pub fn total_volume(&self) -> f64 {
        2.0 * self.edges.iter().map(|e| e.weight).sum::<f64>()
    }

    /// Adjacency lists of `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push((e.head, i));
            adj[e.head].push((e.tail, i));
        }
        adj
    }

    /// Component label per vertex, labels numbered from 0 in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &(v, _) in &adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |c| c + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.component_count() == 1
    }

    /// Errors with [`Error::Disconnected`] unless the graph is connected and has an edge.
    pub fn ensure_connected(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidGraph(format!(
                "routing needs at least two vertices, got {}",
                self.n
            )));
        }
        let components = self.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(())
    }
}

/// Subset of `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            members: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            members: vec![true; n],
        }
    }

    pub fn from_indices(n: usize, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in ids {
            if v >= n {
                return Err(Error::Argument(format!("vertex {v} outside [0, {n})")));
            }
            s.members[v] = true;
        }
        Ok(s)
    }

    pub fn from_mask(members: Vec<bool>) -> Self {
        VertexSet { members }
    }

    /// Bitmask over the first 64 vertices.
    pub(crate) fn from_bits(n: usize, bits: u64) -> Self {
        VertexSet {
            members: (0..n).map(|v| bits >> v & 1 == 1).collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: usize) {
        self.members[v] = true;
    }

    pub fn remove(&mut self, v: usize) {
        self.members[v] = false;
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&b| b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
    }

    pub fn complement(&self) -> Self {
        VertexSet {
            members: self.members.iter().map(|b| !b).collect(),
        }
    }

    pub fn as_mask(&self) -> &[bool] {
        &self.members
    }

    fn check_range(&self, g: &Multigraph) {
        assert_eq!(
            self.members.len(),
            g.n(),
            "vertex set universe does not match graph vertex count"
        );
    }
}

/// Sum of weighted degrees over `s`.
pub fn volume(g: &Multigraph, s: &VertexSet) -> f64 {
    s.check_range(g);
    g.edges()
        .iter()
        .map(|e| e.weight * (s.contains(e.tail) as u8 + s.contains(e.head) as u8) as f64)
        .sum()
}

/// Weight of the edges with exactly one endpoint in `s`.
pub fn cut_weight(g: &Multigraph, s: &VertexSet) -> f64 {
    s.check_range(g);
    g.edges()
        .iter()
        .filter(|e| s.contains(e.tail) != s.contains(e.head))
        .map(|e| e.weight)
        .sum()
}

/// Hop length of the shortest cycle, `None` for forests. Parallel edges form
/// cycles of length 2.
pub fn girth(g: &Multigraph) -> Option<usize> {
    let mut seen = std::collections::HashSet::new();
    for e in g.edges() {
        if !seen.insert(e.key()) {
            return Some(2);
        }
    }
    let adj = g.adjacency();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.n()];
    let mut parent_edge = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for s in 0..g.n() {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        parent_edge.iter_mut().for_each(|p| *p = usize::MAX);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                // Any cycle found from here on is at least 2 * dist[u] + 1 long.
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &(v, ei) in &adj[u] {
                if ei == parent_edge[u] {
                    continue;
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent_edge[v] = ei;
                    queue.push_back(v);
                } else {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_indices(n, ids.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Multigraph::new(2, vec![Edge::unit(0, 0)]).is_err());
        assert!(Multigraph::new(2, vec![Edge::unit(0, 2)]).is_err());
        assert!(Multigraph::new(2, vec![Edge::new(0, 1, 0.5)]).is_err());
        assert!(Multigraph::new(2, vec![Edge::unit(0, 1), Edge::unit(1, 0)]).is_ok());
    }

    #[test]
    fn volume_examples() {
        let k2 = complete(2);
        assert_eq!(volume(&k2, &set(2, &[0])), 1.0);
        assert_eq!(volume(&k2, &set(2, &[0, 1])), 2.0);
        let c4 = cycle(4);
        assert_eq!(volume(&c4, &set(4, &[0, 1])), 4.0);
        assert_eq!(volume(&c4, &VertexSet::full(4)), c4.total_volume());
    }

    #[test]
    fn cut_examples() {
        let k2 = complete(2);
        assert_eq!(cut_weight(&k2, &set(2, &[0])), 1.0);
        assert_eq!(cut_weight(&k2, &VertexSet::empty(2)), 0.0);
        assert_eq!(cut_weight(&cycle(4), &set(4, &[0, 1])), 2.0);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&complete(3)), Some(3));
        assert_eq!(girth(&path(6)), None);
        assert_eq!(girth(&petersen()), Some(5));
        assert_eq!(girth(&cycle(7)), Some(7));
        assert_eq!(girth(&complete(4)), Some(3));
        let double = Multigraph::from_unit_edges(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(girth(&double), Some(2));
    }

    #[test]
    fn connectivity() {
        assert!(cycle(5).is_connected());
        let two = Multigraph::from_unit_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.component_count(), 2);
        assert!(matches!(
            two.ensure_connected(),
            Err(Error::Disconnected { components: 2 })
        ));
    }
}
