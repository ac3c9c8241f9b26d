//! Local-structure diagnostics: components, balls and sampled expansion.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dsu::DisjointSets;
use crate::graphs::Graph;

/// Component sizes over all vertices, largest first.
pub fn component_sizes(g: &Graph) -> Vec<usize> {
    let mut dsu = DisjointSets::new(g.n());
    for &(u, v) in g.edges() {
        dsu.union(u, v);
    }
    dsu.sizes()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallStats {
    pub volume: usize,
    pub has_cycle: bool,
}

/// Vertices within distance `t` of `v`, and whether the subgraph they
/// induce contains a cycle.
pub fn ball_stats(g: &Graph, v: usize, t: usize) -> BallStats {
    let mut depth: HashMap<usize, usize> = HashMap::from([(v, 0)]);
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let d = depth[&x];
        if d == t {
            continue;
        }
        for (_, y) in g.neighbors(x) {
            if let std::collections::hash_map::Entry::Vacant(slot) = depth.entry(y) {
                slot.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    let mut inner_edges = HashSet::new();
    for &x in depth.keys() {
        for (e, y) in g.neighbors(x) {
            if depth.contains_key(&y) {
                inner_edges.insert(e);
            }
        }
    }
    // the ball is connected, so it is a tree iff it has volume - 1 edges
    BallStats {
        volume: depth.len(),
        has_cycle: inner_edges.len() >= depth.len(),
    }
}

/// `|N(U)| / |U|` where `N(U)` are the vertices outside `U` adjacent to `U`.
pub fn expansion_ratio(g: &Graph, subset: &[usize]) -> f64 {
    if subset.is_empty() {
        return 0.0;
    }
    let inside: HashSet<usize> = subset.iter().copied().collect();
    let outside: HashSet<usize> = subset
        .iter()
        .flat_map(|&x| g.neighbors(x).map(|(_, y)| y))
        .filter(|y| !inside.contains(y))
        .collect();
    outside.len() as f64 / inside.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSample {
    pub worst_ratio: f64,
    /// `3c`, the bound the ratio is compared against.
    pub bound: f64,
    pub target_size: usize,
    pub samples: usize,
}

/// Grows `trials` random connected sets of size `ceil(ln n)` (or a whole
/// component if smaller) by randomized BFS and reports the worst
/// neighbourhood-to-size ratio.
pub fn sampled_expansion_check(g: &Graph, c: f64, trials: usize, seed: u64) -> ExpansionSample {
    let target = (g.n().max(2) as f64).ln().ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut samples = 0;
    if g.n() > 0 {
        for _ in 0..trials {
            let start = rng.gen_range(0..g.n());
            let set = grow_connected(g, start, target, &mut rng);
            worst = worst.max(expansion_ratio(g, &set));
            samples += 1;
        }
    }
    ExpansionSample { worst_ratio: worst, bound: 3.0 * c, target_size: target, samples }
}

fn grow_connected(g: &Graph, start: usize, target: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut set = vec![start];
    let mut seen: HashSet<usize> = HashSet::from([start]);
    let mut frontier: Vec<usize> = Vec::new();
    let push_new = |x: usize, seen: &mut HashSet<usize>, frontier: &mut Vec<usize>| {
        for (_, y) in g.neighbors(x) {
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    };
    push_new(start, &mut seen, &mut frontier);
    while set.len() < target && !frontier.is_empty() {
        let i = rng.gen_range(0..frontier.len());
        let x = frontier.swap_remove(i);
        set.push(x);
        push_new(x, &mut seen, &mut frontier);
    }
    set
}
