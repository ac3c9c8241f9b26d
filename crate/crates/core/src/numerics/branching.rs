//! Survival probabilities of complete (k-1)-ary subtrees in a Poisson
//! Galton-Watson process, the k-core threshold `c_k`, and the degree
//! histograms predicted for the peeling process.

use std::collections::BTreeMap;

use super::poisson::{falling_factorial, PoissonTail};
use crate::error::NumericsError;

/// Below this the limiting survival probability is reported as exactly zero.
const BETA_ZERO: f64 = 1e-10;
const BETA_STEP_TOL: f64 = 1e-12;
const BETA_MAX_ITERS: usize = 10_000_000;

fn check_k(k: usize) -> Result<(), NumericsError> {
    if k < 3 {
        return Err(NumericsError::Domain(format!("k must be >= 3, got {k}")));
    }
    Ok(())
}

fn check_c(c: f64) -> Result<(), NumericsError> {
    if !(c.is_finite() && c > 0.0) {
        return Err(NumericsError::Domain(format!("c must be positive, got {c}")));
    }
    Ok(())
}

/// `beta_0 = 1, beta_{t+1} = Psi_{>=k-1}(c beta_t)` and its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingProfile {
    pub k: usize,
    pub c: f64,
    pub betas: Vec<f64>,
    pub beta_limit: f64,
}

impl BranchingProfile {
    /// `beta_t`, extending the recursion past the stored prefix if needed.
    pub fn beta(&self, t: usize) -> f64 {
        if let Some(&b) = self.betas.get(t) {
            return b;
        }
        let mut b = *self.betas.last().expect("betas is never empty");
        for _ in self.betas.len()..=t {
            b = step(self.k, self.c, b);
        }
        b
    }
}

fn step(k: usize, c: f64, beta: f64) -> f64 {
    PoissonTail::unchecked(c * beta).ge(k - 1)
}

/// Limit of the survival recursion, i.e. the largest fixed point of
/// `x = Psi_{>=k-1}(c x)`. Iterates from 1, which converges to the largest
/// fixed point because the map is increasing.
pub fn beta_limit(k: usize, c: f64) -> Result<f64, NumericsError> {
    check_k(k)?;
    check_c(c)?;
    let mut x = 1.0;
    for _ in 0..BETA_MAX_ITERS {
        let next = step(k, c, x);
        if next < BETA_ZERO {
            return Ok(0.0);
        }
        if (x - next).abs() < BETA_STEP_TOL {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

pub fn beta_sequence(k: usize, c: f64, t_max: usize) -> Result<BranchingProfile, NumericsError> {
    check_k(k)?;
    check_c(c)?;
    let mut betas = Vec::with_capacity(t_max + 1);
    betas.push(1.0);
    for t in 0..t_max {
        betas.push(step(k, c, betas[t]));
    }
    Ok(BranchingProfile {
        k,
        c,
        betas,
        beta_limit: beta_limit(k, c)?,
    })
}

/// `h(mu) = mu / Psi_{>=k-1}(mu)`; `c_k` is its minimum over `mu > 0`.
pub fn h(k: usize, mu: f64) -> f64 {
    mu / PoissonTail::unchecked(mu).ge(k - 1)
}

/// `F(mu) = Psi_{>=k-1}(mu) / Psi_{k-1}(mu) = 1 / Pr[Z_{k-1}(mu) = k-1]`.
pub fn f_ratio(k: usize, mu: f64) -> f64 {
    let p = PoissonTail::unchecked(mu);
    p.ge(k - 1) / p.pmf(k - 1)
}

/// Minimizer and minimum of `h`, by golden-section search (h is unimodal).
fn minimize_h(k: usize) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1e-3, 3.0 * k as f64 + 10.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (h(k, x1), h(k, x2));
    while b - a > 1e-11 * b {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = h(k, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = h(k, x2);
        }
    }
    let mu = 0.5 * (a + b);
    (mu, h(k, mu))
}

/// The k-core threshold `c_k = min_{mu > 0} h(mu)`.
pub fn solve_ck(k: usize) -> Result<f64, NumericsError> {
    check_k(k)?;
    Ok(minimize_h(k).1)
}

/// The minimizer `mu_{c_k}` of `h`.
pub fn solve_mu_ck(k: usize) -> Result<f64, NumericsError> {
    check_k(k)?;
    Ok(minimize_h(k).0)
}

/// `mu_c = c beta(c)`, the largest root of `h(mu) = c`.
pub fn solve_mu_c(k: usize, c: f64) -> Result<f64, NumericsError> {
    check_k(k)?;
    check_c(c)?;
    let (mu_ck, ck) = minimize_h(k);
    if c <= ck {
        return Err(NumericsError::Subcritical { k, c, ck });
    }
    // h is increasing on [mu_ck, inf) and mu_c = c beta <= c.
    let (mut lo, mut hi) = (mu_ck, c);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h(k, mid) < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Predicted fraction of vertices of each degree after `t` peeling rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramPrediction {
    pub k: usize,
    pub c: f64,
    pub t: usize,
    /// `delta_j^t` for `j = 0..=j_max` (plain `Psi_j(c)` when `t = 0`).
    pub entries: BTreeMap<usize, f64>,
    /// Extra mass on degree 0 from vertices that were already below `k`.
    pub d0_extra: f64,
}

impl HistogramPrediction {
    /// Predicted fraction of degree-`j` vertices, degree-0 correction included.
    pub fn fraction(&self, j: usize) -> f64 {
        let base = self.entries.get(&j).copied().unwrap_or(0.0);
        if j == 0 {
            base + self.d0_extra
        } else {
            base
        }
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum::<f64>() + self.d0_extra
    }

    /// `sum_j [j]_l entries[j]`.
    pub fn factorial_moment(&self, l: usize) -> f64 {
        self.entries
            .iter()
            .map(|(&j, &p)| falling_factorial(j, l) * p)
            .sum()
    }

    /// Full histogram as `j -> fraction` with the degree-0 correction folded in.
    pub fn fractions(&self) -> BTreeMap<usize, f64> {
        let mut out = self.entries.clone();
        *out.entry(0).or_insert(0.0) += self.d0_extra;
        out
    }
}

pub fn predicted_histogram(k: usize, c: f64, t: usize) -> Result<HistogramPrediction, NumericsError> {
    check_k(k)?;
    check_c(c)?;
    let mut entries = BTreeMap::new();
    if t == 0 {
        let p = PoissonTail::unchecked(c);
        let mut j = 0;
        while (j as f64) <= c || p.ge(j) >= 1e-16 {
            entries.insert(j, p.pmf(j));
            j += 1;
        }
        return Ok(HistogramPrediction { k, c, t, entries, d0_extra: 0.0 });
    }
    let profile = beta_sequence(k, c, t)?;
    let (prev, cur) = (profile.betas[t - 1], profile.betas[t]);
    let alive = PoissonTail::unchecked(c * cur);
    let lost = PoissonTail::unchecked((c * prev - c * cur).max(0.0));
    let mut j = 0usize;
    while j < k || (j as f64) <= c * cur || alive.ge(j) >= 1e-16 {
        entries.insert(j, alive.pmf(j) * lost.ge_signed(k as i64 - j as i64));
        j += 1;
    }
    let d0_extra = PoissonTail::unchecked(c * prev).lt(k);
    Ok(HistogramPrediction { k, c, t, entries, d0_extra })
}

/// `Q = sum_j j (j - 2) fraction_j`; negative means no giant component.
pub fn molloy_reed_q(histogram: &BTreeMap<usize, f64>) -> Result<f64, NumericsError> {
    let total: f64 = histogram.values().sum();
    if histogram.values().any(|&p| !(p >= 0.0)) || total > 1.0 + 1e-9 {
        return Err(NumericsError::Domain(format!(
            "histogram fractions must be nonnegative and sum to at most 1 (sum = {total})"
        )));
    }
    Ok(histogram
        .iter()
        .map(|(&j, &p)| j as f64 * (j as f64 - 2.0) * p)
        .sum())
}

/// Least `t >= 1` with `c Psi_{>=k-2}(c beta_{t-1}) < 1`, the round after
/// which the predicted histogram has a negative Molloy-Reed parameter.
pub fn find_t_dagger(k: usize, c: f64) -> Result<usize, NumericsError> {
    check_k(k)?;
    check_c(c)?;
    let ck = solve_ck(k)?;
    if c >= ck {
        return Err(NumericsError::Supercritical { k, c, ck });
    }
    let mut beta = 1.0;
    for t in 1..=10_000_000 {
        if c * PoissonTail::unchecked(c * beta).ge(k - 2) < 1.0 {
            return Ok(t);
        }
        beta = step(k, c, beta);
    }
    Err(NumericsError::Domain(format!(
        "no shattering round found for k = {k}, c = {c}"
    )))
}

/// Both sides of `sum_j [j]_l Psi_j(lambda) Psi_{>=k-j}(mu - lambda) =
/// lambda^l Psi_{>=k-l}(mu)`.
pub fn poisson_convolution_check(
    lambda: f64,
    mu: f64,
    k: usize,
    ell: usize,
) -> Result<(f64, f64), NumericsError> {
    let inner = PoissonTail::new(lambda)?;
    PoissonTail::new(mu)?;
    if lambda > mu {
        return Err(NumericsError::Domain(format!(
            "need lambda <= mu, got lambda = {lambda}, mu = {mu}"
        )));
    }
    if ell > k {
        return Err(NumericsError::Domain(format!("need ell <= k, got ell = {ell}, k = {k}")));
    }
    let rest = PoissonTail::unchecked(mu - lambda);
    let mut lhs = 0.0;
    let mut j = 0usize;
    loop {
        let term = falling_factorial(j, ell) * inner.pmf(j) * rest.ge_signed(k as i64 - j as i64);
        lhs += term;
        if j >= k && (j as f64) > lambda && j > ell && term.abs() < 1e-20 * lhs.abs().max(1e-300) {
            break;
        }
        if j > 100_000 {
            break;
        }
        j += 1;
    }
    let rhs = lambda.powi(ell as i32) * PoissonTail::unchecked(mu).ge_signed(k as i64 - ell as i64);
    Ok((lhs, rhs))
}
