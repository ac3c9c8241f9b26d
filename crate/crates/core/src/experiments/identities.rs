use rand::Rng;
use serde::Serialize;

use crate::graphs::rng_from_seed;
use crate::numerics::{
    core_constants, f_ratio, falling_factorial, min_mass_bound_holds, poisson_convolution_check, psi, solve_ck,
    solve_mu_ck,
};

/// Threshold values to three decimals, `k = 3..=6`.
pub const CK_TABLE: [(usize, f64); 4] = [(3, 3.351), (4, 5.149), (5, 6.799), (6, 8.365)];

const GRID_SEED: u64 = 0x1d3a_7e55;
const GRID_POINTS: usize = 200;
const C_STEPS: usize = 40;

/// One line of the identity report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    failures: usize,
    max_error: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, cases: 0, failures: 0, max_error: 0.0, first_failure: None }
    }

    fn error(&mut self, err: f64, what: impl FnOnce() -> String) {
        self.cases += 1;
        if err.is_nan() || err > self.tolerance {
            self.fail(what);
        }
        if err > self.max_error || err.is_nan() {
            self.max_error = err;
        }
    }

    fn holds(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(what);
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn finish(self) -> IdentityCheck {
        IdentityCheck {
            name: self.name.into(),
            cases: self.cases,
            failures: self.failures,
            max_error: self.max_error,
            tolerance: self.tolerance,
            passed: self.cases > 0 && self.failures == 0,
            detail: self.first_failure.unwrap_or_default(),
        }
    }
}

/// Relative error with an absolute floor of 1 on the scale.
fn rel(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / rhs.abs().max(1.0)
}

fn ck_table() -> IdentityCheck {
    let mut t = Tally::new("ck_table", 1e-3);
    for (k, want) in CK_TABLE {
        match solve_ck(k) {
            Ok(ck) => t.error((ck - want).abs(), || format!("c_{k} = {ck:.6}, expected {want}")),
            Err(e) => t.holds(false, || format!("c_{k}: {e}")),
        }
    }
    t.finish()
}

fn convolution() -> IdentityCheck {
    let mut t = Tally::new("poisson_convolution", 1e-10);
    let mut rng = rng_from_seed(GRID_SEED);
    for _ in 0..GRID_POINTS {
        let lambda: f64 = rng.gen_range(0.01..20.0);
        let mu = lambda + rng.gen_range(0.0..20.0);
        let k = rng.gen_range(1..=10usize);
        let ell = rng.gen_range(0..=k);
        match poisson_convolution_check(lambda, mu, k, ell) {
            Ok((lhs, rhs)) => t.error(rel(lhs, rhs), || {
                format!("lambda={lambda} mu={mu} k={k} l={ell}: {lhs} vs {rhs}")
            }),
            Err(e) => t.holds(false, || e.to_string()),
        }
    }
    t.finish()
}

fn falling_moment() -> IdentityCheck {
    let mut t = Tally::new("poisson_falling_factorial", 1e-10);
    let mut rng = rng_from_seed(GRID_SEED + 1);
    for _ in 0..GRID_POINTS {
        let lambda: f64 = rng.gen_range(0.01..20.0);
        let ell = rng.gen_range(0..=8usize);
        let j = ell + rng.gen_range(0..=30usize);
        let (Ok(a), Ok(b)) = (psi(j, lambda), psi(j - ell, lambda)) else {
            t.holds(false, || format!("psi failed at lambda={lambda}"));
            continue;
        };
        let lhs = falling_factorial(j, ell) * a;
        let rhs = lambda.powi(ell as i32) * b;
        // both sides can be tiny; compare relative to the larger one
        let err = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
        t.error(err, || format!("lambda={lambda} j={j} l={ell}: {lhs} vs {rhs}"));
    }
    t.finish()
}

fn zero_derivative() -> IdentityCheck {
    let mut t = Tally::new("f_at_mu_ck", 1e-6);
    for k in 3..=10 {
        match solve_mu_ck(k) {
            Ok(mu) => {
                let f = f_ratio(k, mu);
                t.error((f - (k as f64 - 1.0)).abs(), || format!("k={k}: F(mu_ck) = {f}"))
            }
            Err(e) => t.holds(false, || format!("k={k}: {e}")),
        }
    }
    t.finish()
}

/// Grid `k = 3..=10`, `c = c_k (1 + 2 (i / C_STEPS)^2)` for `i = 1..=C_STEPS`,
/// quadratic so that it crowds toward `c_k` where the min-mass bound is tight.
fn supercritical_grid() -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for k in 3..=10 {
        if let Ok(ck) = solve_ck(k) {
            out.extend((1..=C_STEPS).map(|i| {
                let x = i as f64 / C_STEPS as f64;
                (k, ck * (1.0 + 2.0 * x * x))
            }));
        }
    }
    out
}

/// The min-mass inequality with `delta` shifted by `delta_shift`.
fn min_mass(name: &'static str, delta_shift: f64) -> IdentityCheck {
    let mut t = Tally::new(name, 0.0);
    for (k, c) in supercritical_grid() {
        match core_constants(k, c) {
            Ok(cc) => t.holds(min_mass_bound_holds(k, cc.mu_c, cc.delta + delta_shift), || {
                format!("k={k} c={c:.4}: mass {:.6} vs bound with delta={:.6}", cc.min_mass(), cc.delta + delta_shift)
            }),
            Err(e) => t.holds(false, || format!("k={k} c={c}: {e}")),
        }
    }
    t.finish()
}

fn constant_bounds() -> IdentityCheck {
    let mut t = Tally::new("d0_and_delta1_bounds", 0.0);
    for (k, c) in supercritical_grid() {
        match core_constants(k, c) {
            Ok(cc) => t.holds(cc.d0_tail_bound_holds() && cc.delta1_bound_holds(), || {
                format!("k={k} c={c:.4}: d0={} delta1={}", cc.d0, cc.delta1)
            }),
            Err(e) => t.holds(false, || format!("k={k} c={c}: {e}")),
        }
    }
    t.finish()
}

/// Runs every identity and inequality check on its grid, plus a self-test:
/// with `delta + 0.1` the min-mass inequality must fail somewhere, otherwise
/// the checker is not sensitive enough to mean anything.
pub fn run_identity_suite() -> IdentityReport {
    let mutated = min_mass("min_mass_mutated", 0.1);
    let self_test = IdentityCheck {
        name: "min_mass_self_test".into(),
        cases: mutated.cases,
        failures: usize::from(mutated.failures == 0),
        max_error: 0.0,
        tolerance: 0.0,
        passed: mutated.failures > 0,
        detail: format!("{} of {} grid points fail with delta + 0.1", mutated.failures, mutated.cases),
    };
    IdentityReport {
        checks: vec![
            ck_table(),
            convolution(),
            falling_moment(),
            zero_derivative(),
            min_mass("min_mass_bound", 0.0),
            constant_bounds(),
            self_test,
        ],
    }
}
