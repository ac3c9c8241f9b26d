use std::fmt;

use crate::dsu::DisjointSets;
use crate::graphs::{DegreeHistogram, DegreeSequence, Graph};

/// Round in which a vertex first has degree below `k`; `INFINITE` for core vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(u32);

impl Rank {
    pub const INFINITE: Rank = Rank(u32::MAX);

    pub fn finite(t: u32) -> Self {
        assert!(t < u32::MAX, "rank overflow");
        Rank(t)
    }

    pub fn is_finite(self) -> bool {
        self.0 != u32::MAX
    }

    pub fn value(self) -> Option<u32> {
        self.is_finite().then_some(self.0)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(t) => write!(f, "{t}"),
            None => f.write_str("inf"),
        }
    }
}

/// Statistics of `G_t`, counted over all `n` vertices (isolated ones included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundStats {
    pub t: usize,
    pub edges: usize,
    pub largest_component: usize,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelTrace {
    pub k: usize,
    pub ranks: Vec<Rank>,
    /// Number of rounds that removed at least one vertex: one more than the
    /// largest finite rank, 0 when every vertex is in the core.
    pub t_star: usize,
    /// `per_iteration[t]` describes `G_t` for `t = 0..=t_star`.
    pub per_iteration: Vec<RoundStats>,
    /// False when `t_max` cut the process short.
    pub stabilized: bool,
}

impl PeelTrace {
    /// Whether edge `(u, v)` survives in `G_t`.
    pub fn edge_alive(&self, edge: (usize, usize), t: usize) -> bool {
        let r = self.ranks[edge.0].min(self.ranks[edge.1]);
        r.value().map_or(true, |x| x as usize >= t)
    }

    /// Ids of the edges of `G_t`.
    pub fn alive_edges(&self, g: &Graph, t: usize) -> Vec<usize> {
        (0..g.m()).filter(|&e| self.edge_alive(g.edge(e), t)).collect()
    }

    /// `G_t` on the full vertex set, edges renumbered in id order.
    pub fn graph_at(&self, g: &Graph, t: usize) -> Graph {
        let edges = self.alive_edges(g, t).into_iter().map(|e| g.edge(e)).collect();
        Graph::build(g.n(), edges)
    }

    pub fn degree_histogram_at(&self, g: &Graph, t: usize) -> DegreeHistogram {
        let mut deg = vec![0usize; g.n()];
        for e in self.alive_edges(g, t) {
            let (u, v) = g.edge(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        DegreeSequence::new(deg).histogram()
    }

    pub fn core_vertices(&self) -> Vec<usize> {
        (0..self.ranks.len()).filter(|&v| !self.ranks[v].is_finite()).collect()
    }

    pub fn max_finite_rank(&self) -> Option<u32> {
        self.ranks.iter().filter_map(|r| r.value()).max()
    }
}

/// Parallel k-peeling: round `t` removes, all at once, every vertex whose
/// degree in `G_t` is below `k` together with its incident edges.
pub fn peel(g: &Graph, k: usize, t_max: Option<usize>) -> PeelTrace {
    let n = g.n();
    let mut degree = g.degrees();
    let mut ranks = vec![Rank::INFINITE; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| degree[v] < k).collect();
    for &v in &frontier {
        ranks[v] = Rank::finite(0);
    }
    let limit = t_max.unwrap_or(usize::MAX);
    let mut t = 0usize;
    while !frontier.is_empty() && t < limit {
        let mut next = Vec::new();
        for &v in &frontier {
            for &e in g.incident(v) {
                let u = g.other(e, v);
                if ranks[u].is_finite() {
                    continue;
                }
                degree[u] -= 1;
                if degree[u] < k {
                    ranks[u] = Rank::finite(t as u32 + 1);
                    next.push(u);
                }
            }
        }
        frontier = next;
        t += 1;
    }
    let stabilized = frontier.is_empty();
    if !stabilized {
        // rank assigned for a round that was never run
        for v in frontier {
            ranks[v] = Rank::INFINITE;
        }
    }
    let t_star = t;
    let per_iteration = round_stats(g, &ranks, t_star);
    PeelTrace { k, ranks, t_star, per_iteration, stabilized }
}

/// Component statistics of `G_0..=G_{t_star}` by adding edges in reverse
/// order of their removal round.
fn round_stats(g: &Graph, ranks: &[Rank], t_star: usize) -> Vec<RoundStats> {
    let mut by_round: Vec<Vec<usize>> = vec![Vec::new(); t_star + 1];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let slot = ranks[u].min(ranks[v]).value().map_or(t_star, |r| r as usize);
        by_round[slot.min(t_star)].push(e);
    }
    let mut dsu = DisjointSets::new(g.n());
    let mut edges = 0usize;
    let mut out = vec![
        RoundStats { t: 0, edges: 0, largest_component: 0, components: 0 };
        t_star + 1
    ];
    for t in (0..=t_star).rev() {
        for &e in &by_round[t] {
            let (u, v) = g.edge(e);
            dsu.union(u, v);
            edges += 1;
        }
        out[t] = RoundStats {
            t,
            edges,
            largest_component: dsu.largest(),
            components: dsu.set_count(),
        };
    }
    out
}
