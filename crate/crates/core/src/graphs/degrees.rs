use std::collections::BTreeMap;

use rand::Rng;

use super::generators::rng_from_seed;
use super::graph::Graph;
use crate::error::GraphError;
use crate::numerics::TruncatedPoisson;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Self {
        Self { degrees }
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    pub fn max(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn is_even(&self) -> bool {
        self.sum() % 2 == 0
    }

    pub fn histogram(&self) -> DegreeHistogram {
        let mut counts = BTreeMap::new();
        for &d in &self.degrees {
            *counts.entry(d).or_insert(0) += 1;
        }
        DegreeHistogram { counts, n: self.degrees.len() }
    }
}

impl From<Vec<usize>> for DegreeSequence {
    fn from(degrees: Vec<usize>) -> Self {
        Self::new(degrees)
    }
}

/// `D_j`, the number of vertices of degree `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<usize, usize>,
    pub n: usize,
}

impl DegreeHistogram {
    pub fn count(&self, j: usize) -> usize {
        self.counts.get(&j).copied().unwrap_or(0)
    }

    /// `j -> D_j / n`.
    pub fn fractions(&self) -> BTreeMap<usize, f64> {
        let n = self.n.max(1) as f64;
        self.counts.iter().map(|(&j, &c)| (j, c as f64 / n)).collect()
    }
}

pub fn degree_histogram(g: &Graph) -> DegreeHistogram {
    DegreeSequence::new(g.degrees()).histogram()
}

/// `lambda(d) = (1/2) sum [d_i]_2 / sum d_i`.
pub fn lambda_of_sequence(degrees: &DegreeSequence) -> Result<f64, GraphError> {
    let sum = degrees.sum();
    if sum == 0 {
        return Err(GraphError::Domain("degree sum is zero".into()));
    }
    let pairs: f64 = degrees
        .degrees()
        .iter()
        .map(|&d| d as f64 * (d as f64 - 1.0))
        .sum();
    Ok(0.5 * pairs / sum as f64)
}

/// `n_hat` independent draws of `Z_k(lambda)`, redrawn in full until the sum is even.
pub fn sample_core_like_sequence(
    n_hat: usize,
    k: usize,
    lambda: f64,
    seed: u64,
) -> Result<DegreeSequence, GraphError> {
    let z = TruncatedPoisson::new(k, lambda).map_err(|e| GraphError::Domain(e.to_string()))?;
    let cdf = z.cdf_table();
    let mut rng = rng_from_seed(seed);
    loop {
        let degrees: Vec<usize> = (0..n_hat)
            .map(|_| {
                let u: f64 = rng.gen();
                k + cdf.partition_point(|&f| f <= u).min(cdf.len() - 1)
            })
            .collect();
        let seq = DegreeSequence::new(degrees);
        if seq.is_even() {
            return Ok(seq);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_histogram() {
        let h = degree_histogram(&Graph::complete(4));
        assert_eq!(h.counts, BTreeMap::from([(3, 4)]));
        assert_eq!(h.n, 4);
    }

    #[test]
    fn lambda_regular() {
        let seq = DegreeSequence::new(vec![3; 20]);
        assert_eq!(lambda_of_sequence(&seq).unwrap(), 1.0);
        assert!(lambda_of_sequence(&DegreeSequence::new(vec![0, 0])).is_err());
    }

    #[test]
    fn core_like_sequence_basic() {
        for seed in 0..20 {
            let seq = sample_core_like_sequence(101, 3, 2.5, seed).unwrap();
            assert_eq!(seq.len(), 101);
            assert!(seq.is_even());
            assert!(seq.degrees().iter().all(|&d| d >= 3));
        }
        assert!(sample_core_like_sequence(10, 3, 0.0, 0).is_err());
    }
}
