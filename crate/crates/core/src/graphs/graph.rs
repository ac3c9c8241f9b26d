use std::collections::HashSet;

use crate::error::GraphError;

/// Undirected (multi)graph with stable vertex and edge ids.
///
/// Adjacency is stored in CSR form as incident edge ids. A loop appears
/// twice in its vertex's list, so it contributes 2 to the degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    incidence: Vec<usize>,
    simple: bool,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
        }
        Ok(Self::build(n, edges))
    }

    pub(crate) fn build(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![0usize; offsets[n]];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incidence[fill[u]] = e;
            fill[u] += 1;
            incidence[fill[v]] = e;
            fill[v] += 1;
        }
        let simple = is_simple_edge_list(&edges);
        Self { n, edges, offsets, incidence, simple }
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for v in 1..n {
            for u in 0..v {
                edges.push((u, v));
            }
        }
        Self::build(n, edges)
    }

    pub fn path(n: usize) -> Self {
        Self::build(n, (1..n).map(|v| (v - 1, v)).collect())
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Self::build(n, edges)
    }

    /// Center 0 joined to `leaves` vertices.
    pub fn star(leaves: usize) -> Self {
        Self::build(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Incident edge ids of `v`, loops listed twice.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// The endpoint of `e` opposite `v` (`v` itself for a loop).
    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// `(edge id, neighbor)` pairs around `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.incident(v).iter().map(move |&e| (e, self.other(e, v)))
    }

    /// Subgraph induced by `vertices`, renumbered in increasing original id.
    pub fn induced(&self, vertices: &[usize]) -> InducedSubgraph {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                edges.push((new_id[u], new_id[v]));
                edge_map.push(e);
            }
        }
        InducedSubgraph {
            graph: Self::build(keep.len(), edges),
            vertex_map: keep,
            edge_map,
        }
    }
}

/// An induced subgraph with maps from its ids back to the parent's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

fn is_simple_edge_list(edges: &[(usize, usize)]) -> bool {
    let mut seen = HashSet::with_capacity(edges.len());
    edges
        .iter()
        .all(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
}
