//! Constants derived from `(k, c)` in the supercritical regime: the core's
//! limiting shape and the parameters of the tree search used by Maker.

use std::fmt;

use super::branching::{solve_ck, solve_mu_c, solve_mu_ck};
use super::poisson::{PoissonTail, TruncatedPoisson};
use crate::error::NumericsError;

#[derive(Debug, Clone, PartialEq)]
pub struct CoreConstants {
    pub k: usize,
    pub c: f64,
    pub c_k: f64,
    pub mu_c: f64,
    pub mu_ck: f64,
    pub delta: f64,
    /// Light-path length bound for the tree search.
    pub l: usize,
    /// Slack factor `(1 - delta)^2 / (1 - 2 delta)`.
    pub c_slack: f64,
    /// `1 + k^(L+1)`, `None` when it does not fit in a `u64`.
    pub c_tree: Option<u64>,
    pub d0: usize,
    pub delta1: f64,
    /// Underflows to 0 for every practical `(k, c)`; see `ln_eps1`.
    pub eps1: f64,
    pub eps: f64,
    pub ln_eps1: f64,
    pub ln_eps: f64,
    /// Limiting fraction of vertices in the core.
    pub nhat_frac: f64,
    /// Limiting number of core edges per vertex of the whole graph.
    pub mhat_frac: f64,
    /// Limiting average core degree.
    pub dhat: f64,
}

impl CoreConstants {
    /// `Pr[Z_{k-1}(mu_c) = k-1]`.
    pub fn min_mass(&self) -> f64 {
        TruncatedPoisson::new(self.k - 1, self.mu_c)
            .map(|z| z.pmf(self.k - 1))
            .unwrap_or(f64::NAN)
    }

    /// `Pr[Z_{k-1}(mu_c) = k-1] < (1 - 2 delta) / (k - 1)`.
    pub fn min_mass_bound_holds(&self) -> bool {
        min_mass_bound_holds(self.k, self.mu_c, self.delta)
    }

    /// `C (1 - sum_{i <= d0} p_i) <= delta^2 / (2 mu_c)`.
    pub fn d0_tail_bound_holds(&self) -> bool {
        self.c_slack * biased_tail(self.k, self.mu_c, self.d0) <= self.delta.powi(2) / (2.0 * self.mu_c)
    }

    /// `(1 - delta/2) delta1^(-4 delta1) < 1 - delta/4`.
    pub fn delta1_bound_holds(&self) -> bool {
        delta1_ok(self.delta, self.delta1)
    }

    /// `(key, value)` pairs in a stable order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("k", self.k.to_string()),
            ("c", self.c.to_string()),
            ("c_k", format!("{:.12}", self.c_k)),
            ("mu_c", format!("{:.12}", self.mu_c)),
            ("mu_ck", format!("{:.12}", self.mu_ck)),
            ("delta", format!("{:.12e}", self.delta)),
            ("L", self.l.to_string()),
            ("C", format!("{:.12}", self.c_slack)),
            (
                "C_tree",
                self.c_tree.map_or_else(|| "overflow".to_string(), |v| v.to_string()),
            ),
            ("d0", self.d0.to_string()),
            ("delta1", format!("{:.12e}", self.delta1)),
            ("eps1", format!("{:.12e}", self.eps1)),
            ("eps", format!("{:.12e}", self.eps)),
            ("ln_eps1", format!("{:.12}", self.ln_eps1)),
            ("ln_eps", format!("{:.12}", self.ln_eps)),
            ("nhat_frac", format!("{:.12}", self.nhat_frac)),
            ("mhat_frac", format!("{:.12}", self.mhat_frac)),
            ("dhat", format!("{:.12}", self.dhat)),
        ]
    }
}

impl fmt::Display for CoreConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in self.fields() {
            writeln!(f, "{key}={value}")?;
        }
        Ok(())
    }
}

pub fn min_mass_bound_holds(k: usize, mu_c: f64, delta: f64) -> bool {
    let z = match TruncatedPoisson::new(k - 1, mu_c) {
        Ok(z) => z,
        Err(_) => return false,
    };
    z.pmf(k - 1) < (1.0 - 2.0 * delta) / (k as f64 - 1.0)
}

/// `1 - sum_{i <= d0} p_i` with `p_j = Pr[Z_{k-1}(mu) = j - 1]`, i.e.
/// `Pr[Z_{k-1}(mu) >= d0]`.
fn biased_tail(k: usize, mu: f64, d0: usize) -> f64 {
    let p = PoissonTail::unchecked(mu);
    if d0 <= k - 1 {
        return 1.0;
    }
    p.ge(d0) / p.ge(k - 1)
}

fn delta1_ok(delta: f64, delta1: f64) -> bool {
    (1.0 - delta / 2.0) * delta1.powf(-4.0 * delta1) < 1.0 - delta / 4.0
}

/// `1 + k^(L+1)`, or `None` if it does not fit in a `u64`.
pub fn tree_constant(k: usize, l: usize) -> Option<u64> {
    u32::try_from(l + 1)
        .ok()
        .and_then(|e| (k as u64).checked_pow(e))
        .and_then(|v| v.checked_add(1))
}

pub fn core_constants(k: usize, c: f64) -> Result<CoreConstants, NumericsError> {
    let c_k = solve_ck(k)?;
    if c <= c_k {
        return Err(NumericsError::Subcritical { k, c, ck: c_k });
    }
    let mu_c = solve_mu_c(k, c)?;
    let mu_ck = solve_mu_ck(k)?;
    let kf = k as f64;
    let delta = 0.5 * (1.0 - c_k / c) * (kf - 2.0) / (kf - 1.0);
    let target = delta * delta / (2.0 * mu_c);
    let l = (target.ln() / (1.0 - delta).ln()).ceil().max(1.0) as usize;
    let c_slack = (1.0 - delta).powi(2) / (1.0 - 2.0 * delta);
    let c_tree = tree_constant(k, l);

    let mut d0 = k;
    while c_slack * biased_tail(k, mu_c, d0) > target {
        d0 += 1;
    }

    let delta1 = (1..=1000)
        .map(|i| (-1.0f64).exp() * 0.5f64.powi(i))
        .find(|&d1| delta1_ok(delta, d1))
        .ok_or_else(|| NumericsError::Domain(format!("no admissible delta1 for delta = {delta}")))?;

    let e = std::f64::consts::E;
    let ln_eps1 = [
        -(1.0 + 1.0 / delta1) * (2.0 + c.ln()),
        (delta / (2.0 - delta)).ln(),
        -(1.0 + 2.0 * e.powi(4) * kf.powi(6)).ln(),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);

    let p = PoissonTail::unchecked(mu_c);
    let nhat_frac = p.ge(k);
    let mhat_frac = mu_c * p.ge(k - 1) / 2.0;
    let ln_eps = ln_eps1 + nhat_frac.ln() - 2f64.ln();
    Ok(CoreConstants {
        k,
        c,
        c_k,
        mu_c,
        mu_ck,
        delta,
        l,
        c_slack,
        c_tree,
        d0,
        delta1,
        eps1: ln_eps1.exp(),
        eps: ln_eps.exp(),
        ln_eps1,
        ln_eps,
        nhat_frac,
        mhat_frac,
        dhat: 2.0 * mhat_frac / nhat_frac,
    })
}

/// Height, light-path bound and degree cap used by the tree search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub height: usize,
    pub l: usize,
    pub d0: usize,
}

impl TreeParams {
    /// `N = ceil((ln ln n)^2)` with `L` and `d0` from the constants.
    pub fn from_constants(constants: &CoreConstants, n: usize) -> Self {
        Self {
            height: default_height(n),
            l: constants.l,
            d0: constants.d0,
        }
    }

    /// Replaces whichever fields are given.
    pub fn with_overrides(self, height: Option<usize>, l: Option<usize>, d0: Option<usize>) -> Self {
        Self {
            height: height.unwrap_or(self.height),
            l: l.unwrap_or(self.l),
            d0: d0.unwrap_or(self.d0),
        }
    }
}

pub fn default_height(n: usize) -> usize {
    let lnln = (n.max(3) as f64).ln().ln();
    (lnln * lnln).ceil().max(1.0) as usize
}
