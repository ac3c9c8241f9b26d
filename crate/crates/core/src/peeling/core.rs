use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::peel::peel;
use crate::graphs::Graph;

/// The k-core, renumbered in increasing original id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    pub core: Graph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub nhat: usize,
    pub mhat: usize,
}

pub fn k_core(g: &Graph, k: usize) -> CoreResult {
    let trace = peel(g, k, None);
    let sub = g.induced(&trace.core_vertices());
    CoreResult {
        nhat: sub.graph.n(),
        mhat: sub.graph.m(),
        core: sub.graph,
        vertex_map: sub.vertex_map,
        edge_map: sub.edge_map,
    }
}

/// `|E| - |V|`.
pub fn excess(g: &Graph) -> i64 {
    g.m() as i64 - g.n() as i64
}

/// Edges of `host` with exactly one endpoint in `subset`.
pub fn boundary(host: &Graph, subset: &[usize]) -> usize {
    let mut inside = vec![false; host.n()];
    for &v in subset {
        inside[v] = true;
    }
    host.edges()
        .iter()
        .filter(|&&(u, v)| inside[u] != inside[v])
        .count()
}

/// State of the sequential 2-peel after some number of deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStep {
    pub vertices: usize,
    pub edges: usize,
    pub boundary: usize,
}

impl ChainStep {
    pub fn excess(&self) -> i64 {
        self.edges as i64 - self.vertices as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCoreReport {
    pub two_core: Graph,
    /// Host ids of the 2-core vertices, increasing.
    pub vertex_map: Vec<usize>,
    pub excess: i64,
    pub boundary: usize,
    /// Starts at `host[subset]` and ends at the 2-core, one entry per deletion.
    pub chain: Vec<ChainStep>,
}

impl TwoCoreReport {
    /// If the starting set has `|∂F| <= b|V(F)|` and nonnegative excess, checks
    /// that every deletion keeps the excess from falling and `|∂| - b|V|` from
    /// rising. Vacuously true when the hypothesis fails.
    pub fn check_chain(&self, b: usize) -> Result<(), String> {
        let first = match self.chain.first() {
            Some(s) => *s,
            None => return Ok(()),
        };
        if first.boundary > b * first.vertices || first.excess() < 0 {
            return Ok(());
        }
        let slack = |s: &ChainStep| s.boundary as i64 - (b * s.vertices) as i64;
        for w in self.chain.windows(2) {
            if w[1].excess() < w[0].excess() {
                return Err(format!("excess fell from {} to {}", w[0].excess(), w[1].excess()));
            }
            if slack(&w[1]) > slack(&w[0]) {
                return Err(format!(
                    "boundary slack rose from {} to {} at {} vertices",
                    slack(&w[0]),
                    slack(&w[1]),
                    w[1].vertices
                ));
            }
        }
        let last = self.chain.last().expect("nonempty chain");
        if self.excess < first.excess() || last.boundary > b * last.vertices {
            return Err("final 2-core violates the excess or boundary bound".into());
        }
        Ok(())
    }
}

/// Starting from `host[subset]`, repeatedly deletes the lowest-id vertex of
/// degree at most 1 until none is left.
pub fn two_core_sequential(host: &Graph, subset: &[usize]) -> TwoCoreReport {
    let n = host.n();
    let mut inside = vec![false; n];
    for &v in subset {
        inside[v] = true;
    }
    let mut deg = vec![0usize; n];
    let mut vertices = inside.iter().filter(|&&x| x).count();
    let mut edges = 0usize;
    let mut bound = 0usize;
    for &(u, v) in host.edges() {
        match (inside[u], inside[v]) {
            (true, true) => {
                deg[u] += 1;
                deg[v] += 1;
                edges += 1;
            }
            (true, false) | (false, true) => bound += 1,
            _ => {}
        }
    }
    let mut chain = vec![ChainStep { vertices, edges, boundary: bound }];
    let mut heap: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| inside[v] && deg[v] <= 1).map(Reverse).collect();
    while let Some(Reverse(v)) = heap.pop() {
        if !inside[v] {
            continue;
        }
        inside[v] = false;
        vertices -= 1;
        for &e in host.incident(v) {
            let u = host.other(e, v);
            if u == v {
                continue;
            }
            if inside[u] {
                // internal edge becomes a boundary edge of the remaining set
                edges -= 1;
                bound += 1;
                deg[u] -= 1;
                if deg[u] == 1 {
                    heap.push(Reverse(u));
                }
            } else {
                bound -= 1;
            }
        }
        chain.push(ChainStep { vertices, edges, boundary: bound });
    }
    let keep: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
    let sub = host.induced(&keep);
    TwoCoreReport {
        excess: excess(&sub.graph),
        boundary: bound,
        two_core: sub.graph,
        vertex_map: sub.vertex_map,
        chain,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_examples() {
        let c5 = k_core(&Graph::cycle(5), 2);
        assert_eq!(c5.core, Graph::cycle(5));
        assert_eq!(c5.vertex_map, vec![0, 1, 2, 3, 4]);
        let p4 = k_core(&Graph::path(4), 2);
        assert_eq!((p4.nhat, p4.mhat), (0, 0));
    }

    #[test]
    fn excess_and_boundary() {
        assert_eq!(excess(&Graph::path(6)), -1);
        assert_eq!(boundary(&Graph::complete(4), &[2]), 3);
        assert_eq!(boundary(&Graph::complete(4), &[0, 1, 2, 3]), 0);
    }

    #[test]
    fn two_core_of_cycle_with_tail() {
        // cycle 0..5 with a pendant path 5-6-7
        let mut edges: Vec<_> = Graph::cycle(5).edges().to_vec();
        edges.extend([(4, 5), (5, 6), (6, 7)]);
        let host = Graph::new(8, edges).unwrap();
        let rep = two_core_sequential(&host, &(0..8).collect::<Vec<_>>());
        assert_eq!(rep.vertex_map, vec![0, 1, 2, 3, 4]);
        assert_eq!(rep.excess, 0);
        assert_eq!(rep.boundary, 1);
        assert_eq!(rep.chain.len(), 4);

        let only_cycle = two_core_sequential(&host, &[0, 1, 2, 3, 4]);
        assert_eq!(only_cycle.excess, 0);
        assert_eq!(only_cycle.chain.len(), 1);
    }

    #[test]
    fn tree_has_empty_two_core() {
        let rep = two_core_sequential(&Graph::star(6), &(0..7).collect::<Vec<_>>());
        assert_eq!(rep.two_core.n(), 0);
        assert_eq!(rep.excess, 0);
        assert_eq!(rep.chain.last().unwrap().vertices, 0);
    }

    #[test]
    fn boundary_tracking_matches_recount() {
        let host = Graph::complete(6);
        let rep = two_core_sequential(&host, &[0, 1, 5]);
        assert_eq!(rep.boundary, boundary(&host, &rep.vertex_map));
        assert_eq!(rep.chain[0].boundary, boundary(&host, &[0, 1, 5]));
    }
}
