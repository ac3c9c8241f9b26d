use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::degrees::DegreeSequence;
use super::graph::Graph;
use crate::error::GraphError;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi G(n, p) by geometric skipping over the pairs `(w, v)`, `w < v`,
/// taken in order of `v` then `w`. Expected time O(n + m).
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::Domain(format!("edge probability {p} not in [0, 1]")));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rng_from_seed(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::with_capacity((p * (n as f64) * (n as f64 - 1.0) / 2.0 * 1.1) as usize + 16);
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w += 1 + if skip.is_finite() { skip.min(i64::MAX as f64 / 4.0) as i64 } else { i64::MAX / 4 };
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Ok(Graph::build(n, edges))
}

/// Maps a pair index in `[0, n(n-1)/2)` to `(u, v)` with `u < v`, ordered by `v` then `u`.
fn pair_from_index(i: u64) -> (usize, usize) {
    let mut v = ((1.0 + (1.0 + 8.0 * i as f64).sqrt()) / 2.0).floor() as u64;
    while v * (v - 1) / 2 > i {
        v -= 1;
    }
    while (v + 1) * v / 2 <= i {
        v += 1;
    }
    ((i - v * (v - 1) / 2) as usize, v as usize)
}

/// Erdős–Rényi G(n, m): `m` distinct pairs uniformly at random. When `m` is
/// more than half of all pairs the complement is sampled instead.
pub fn gen_gnm(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if m as u64 > total {
        return Err(GraphError::Domain(format!("m = {m} exceeds n(n-1)/2 = {total}")));
    }
    let mut rng = rng_from_seed(seed);
    if (m as u64) * 2 <= total {
        let mut seen = HashSet::with_capacity(m);
        let mut edges = Vec::with_capacity(m);
        while edges.len() < m {
            let i = rng.gen_range(0..total);
            if seen.insert(i) {
                edges.push(pair_from_index(i));
            }
        }
        Ok(Graph::build(n, edges))
    } else {
        let skip = (total - m as u64) as usize;
        let mut excluded = HashSet::with_capacity(skip);
        while excluded.len() < skip {
            excluded.insert(rng.gen_range(0..total));
        }
        let mut edges: Vec<(usize, usize)> = (0..total)
            .filter(|i| !excluded.contains(i))
            .map(pair_from_index)
            .collect();
        edges.shuffle(&mut rng);
        Ok(Graph::build(n, edges))
    }
}

fn half_edges(degrees: &DegreeSequence) -> Result<Vec<usize>, GraphError> {
    let sum = degrees.sum();
    if sum % 2 == 1 {
        return Err(GraphError::OddDegreeSum(sum));
    }
    let mut points = Vec::with_capacity(sum);
    for (v, &d) in degrees.degrees().iter().enumerate() {
        points.extend(std::iter::repeat(v).take(d));
    }
    Ok(points)
}

fn configuration_with(degrees: &DegreeSequence, rng: &mut ChaCha8Rng) -> Result<Graph, GraphError> {
    let mut points = half_edges(degrees)?;
    points.shuffle(rng);
    let edges = points.chunks_exact(2).map(|p| (p[0], p[1])).collect();
    Ok(Graph::build(degrees.len(), edges))
}

/// Configuration-model multigraph: a uniform perfect matching of the half-edges.
pub fn gen_configuration(degrees: &DegreeSequence, seed: u64) -> Result<Graph, GraphError> {
    configuration_with(degrees, &mut rng_from_seed(seed))
}

/// A simple graph drawn by rejection from the configuration model.
#[derive(Debug, Clone)]
pub struct SimpleSample {
    pub graph: Graph,
    /// Configurations drawn, the accepted one included.
    pub tries: usize,
}

/// Draws configurations until one is simple. The result is uniform over
/// simple graphs with the given degrees.
pub fn gen_simple_from_sequence(
    degrees: &DegreeSequence,
    seed: u64,
    max_tries: usize,
) -> Result<SimpleSample, GraphError> {
    let mut points = half_edges(degrees)?;
    let mut rng = rng_from_seed(seed);
    let mut seen = HashSet::with_capacity(points.len() / 2);
    for tries in 1..=max_tries {
        points.shuffle(&mut rng);
        seen.clear();
        let simple = points
            .chunks_exact(2)
            .all(|p| p[0] != p[1] && seen.insert((p[0].min(p[1]), p[0].max(p[1]))));
        if simple {
            let edges = points.chunks_exact(2).map(|p| (p[0], p[1])).collect();
            return Ok(SimpleSample { graph: Graph::build(degrees.len(), edges), tries });
        }
    }
    Err(GraphError::RejectionExhausted { tries: max_tries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_roundtrip() {
        let mut i = 0u64;
        for v in 1..60usize {
            for u in 0..v {
                assert_eq!(pair_from_index(i), (u, v));
                i += 1;
            }
        }
        let big = 999_999u64 * 999_998 / 2 + 17;
        assert_eq!(pair_from_index(big), (17, 999_999));
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(gen_gnp(50, 0.0, 1).unwrap().m(), 0);
        let full = gen_gnp(12, 1.0, 1).unwrap();
        assert_eq!(full.m(), 66);
        assert!(gen_gnp(5, 1.5, 1).is_err());
        assert!(gen_gnp(5, -0.1, 1).is_err());
    }

    #[test]
    fn gnp_is_simple_and_deterministic() {
        let a = gen_gnp(2000, 0.003, 42).unwrap();
        let b = gen_gnp(2000, 0.003, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.is_simple());
        assert!(a.edges().iter().all(|&(u, v)| u < v));
    }

    #[test]
    fn gnm_counts_and_dense_branch() {
        for (n, m) in [(10, 0), (10, 10), (10, 30), (10, 45), (100, 300)] {
            let g = gen_gnm(n, m, 3).unwrap();
            assert_eq!(g.m(), m);
            assert!(g.is_simple());
        }
        assert!(gen_gnm(4, 7, 0).is_err());
    }

    #[test]
    fn configuration_small_cases() {
        let zero = DegreeSequence::new(vec![0, 0, 0]);
        assert_eq!(gen_configuration(&zero, 1).unwrap().m(), 0);
        let one = DegreeSequence::new(vec![1, 1]);
        for s in 0..20 {
            let g = gen_configuration(&one, s).unwrap();
            assert_eq!(g.m(), 1);
            assert!(g.is_simple());
        }
        assert!(matches!(
            gen_configuration(&DegreeSequence::new(vec![1, 2]), 0),
            Err(GraphError::OddDegreeSum(3))
        ));
    }

    #[test]
    fn simple_sample_first_try_on_single_edge() {
        let s = gen_simple_from_sequence(&DegreeSequence::new(vec![1, 1]), 5, 10).unwrap();
        assert_eq!(s.tries, 1);
        assert!(matches!(
            gen_simple_from_sequence(&DegreeSequence::new(vec![2]), 5, 10),
            Err(GraphError::RejectionExhausted { tries: 10 })
        ));
    }
}
