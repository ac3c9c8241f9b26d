use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::ExperimentError;
use crate::breaker::{CheckMode, SbStrategy};
use crate::engine::{play, random_strategy, LowestFirst, Strategy};
use crate::graphs::{gen_gnp, Graph};
use crate::maker::{naive_strategy, tree_params_for, TwoPhaseConfig, TwoPhaseStrategy};
use crate::numerics::{core_constants, find_t_dagger, predicted_histogram, solve_ck, TruncatedPoisson};
use crate::peeling::{k_core, peel};

/// Offsets added to a trial's seed for the strategies' own randomness.
pub const MAKER_SEED_OFFSET: u64 = 0x6d61_6b65;
pub const BREAKER_SEED_OFFSET: u64 = 0x6272_6b72;

/// Component fraction counted as "linear" in the phase-transition runs.
pub const LINEAR_FRACTION: f64 = 0.005;

/// `(ln n)^3`.
pub fn log3n(n: usize) -> f64 {
    (n as f64).ln().powi(3)
}

fn board(n: usize, c: f64, seed: u64) -> Result<Graph, ExperimentError> {
    Ok(gen_gnp(n, c / n as f64, seed)?)
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// All `(n, c, trial)` combinations in output order.
fn jobs(cfg: &ExperimentConfig) -> Vec<(usize, f64, usize)> {
    let mut out = Vec::new();
    for &n in &cfg.n {
        for &c in &cfg.c {
            out.extend((0..cfg.trials).map(|t| (n, c, t)));
        }
    }
    out
}

fn run_jobs<R: Send>(
    cfg: &ExperimentConfig,
    f: impl Fn(usize, f64, usize) -> Result<Vec<R>, ExperimentError> + Sync,
) -> Result<Vec<R>, ExperimentError> {
    let per_job: Vec<Vec<R>> = jobs(cfg).into_par_iter().map(|(n, c, t)| f(n, c, t)).collect::<Result<_, _>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

fn refuse_supercritical(cfg: &ExperimentConfig) -> Result<(), ExperimentError> {
    let ck = solve_ck(cfg.k)?;
    if let Some(&c) = cfg.c.iter().find(|&&c| c >= ck) {
        return Err(ExperimentError::Refused(format!(
            "{} needs c below c_{} = {ck:.6}, got c = {c}",
            cfg.experiment, cfg.k
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRow {
    pub n: usize,
    pub c: f64,
    pub b: usize,
    pub trial: usize,
    pub seed: u64,
    pub maker: String,
    pub breaker: String,
    pub first: String,
    #[serde(rename = "N")]
    pub height: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    pub d0: Option<usize>,
    pub t_dagger: Option<usize>,
    pub maker_degraded: String,
    pub largest_component: usize,
    pub fraction: f64,
    pub log3n: f64,
    pub below_log3n: bool,
    pub reached_linear: bool,
    pub rounds: usize,
    pub nl_tree_vertices: Option<usize>,
    pub sm_rounds: Option<usize>,
    pub sm_ledger_checks: Option<usize>,
    pub f_excess: Option<i64>,
    pub chain_applies: Option<bool>,
    pub violations: usize,
    pub first_violation: String,
    pub wall_ms: u64,
}

/// Maker strategy by name: `naive`, `two-phase`, `random` or `lowest`.
pub fn build_maker(
    name: &str,
    g: &Graph,
    b: usize,
    seed: u64,
    two_phase: &TwoPhaseConfig,
) -> Result<Box<dyn Strategy>, ExperimentError> {
    Ok(match name {
        "naive" => Box::new(naive_strategy(g, b)),
        "two-phase" => Box::new(TwoPhaseStrategy::new(g, b, seed, two_phase)?),
        "random" => Box::new(random_strategy(seed)),
        "lowest" => Box::new(LowestFirst),
        other => return Err(ExperimentError::Refused(format!("unknown maker '{other}'"))),
    })
}

/// Breaker strategy by name: `sb`, `sb-refined`, `random` or `lowest`.
pub fn build_breaker(
    name: &str,
    g: &Graph,
    b: usize,
    seed: u64,
    checks: CheckMode,
) -> Result<Box<dyn Strategy>, ExperimentError> {
    Ok(match name {
        "sb" => Box::new(SbStrategy::new(g, b).check_mode(checks)),
        "sb-refined" => Box::new(SbStrategy::new(g, b).check_mode(checks).refined(true)),
        "random" => Box::new(random_strategy(seed)),
        "lowest" => Box::new(LowestFirst),
        other => return Err(ExperimentError::Refused(format!("unknown breaker '{other}'"))),
    })
}

fn two_phase_config(cfg: &ExperimentConfig, c: f64) -> TwoPhaseConfig {
    TwoPhaseConfig { c: Some(c), height: cfg.height, l: cfg.l, d0: cfg.d0, restarts: cfg.restarts }
}

/// Every Maker against every Breaker on a `G(n, c/n)` board per trial.
pub fn run_phase_transition(cfg: &ExperimentConfig) -> Result<Vec<PhaseRow>, ExperimentError> {
    let ck = solve_ck(cfg.b + 2)?;
    run_jobs(cfg, |n, c, trial| {
        let seed = cfg.trial_seed(trial);
        let g = board(n, c, seed)?;
        let first = cfg.first.resolve(c, ck);
        let params = tree_params_for(&g, cfg.b + 2, &two_phase_config(cfg, c));
        let t_dagger = find_t_dagger(cfg.b + 2, c).ok();
        let mut rows = Vec::new();
        for maker_name in &cfg.makers {
            for breaker_name in &cfg.breakers {
                let start = Instant::now();
                let mut maker =
                    build_maker(maker_name, &g, cfg.b, seed.wrapping_add(MAKER_SEED_OFFSET), &two_phase_config(cfg, c))?;
                let mut breaker =
                    build_breaker(breaker_name, &g, cfg.b, seed.wrapping_add(BREAKER_SEED_OFFSET), cfg.checks)?;
                let r = play(&g, cfg.b, maker.as_mut(), breaker.as_mut(), first)?;
                let note = |key: &str| r.note(key).and_then(|v| v.parse::<usize>().ok());
                rows.push(PhaseRow {
                    n,
                    c,
                    b: cfg.b,
                    trial,
                    seed,
                    maker: maker_name.clone(),
                    breaker: breaker_name.clone(),
                    first: first.to_string(),
                    height: note("N").or(params.map(|p| p.height)),
                    l: note("L").or(params.map(|p| p.l)),
                    d0: note("d0").or(params.map(|p| p.d0)),
                    t_dagger,
                    maker_degraded: r.note("maker_degraded").unwrap_or("").to_string(),
                    largest_component: r.largest_maker_component,
                    fraction: r.largest_maker_component as f64 / n as f64,
                    log3n: log3n(n),
                    below_log3n: (r.largest_maker_component as f64) <= log3n(n),
                    reached_linear: r.largest_maker_component as f64 >= LINEAR_FRACTION * n as f64,
                    rounds: r.rounds,
                    nl_tree_vertices: note("nl_tree_vertices"),
                    sm_rounds: note("sm_rounds"),
                    sm_ledger_checks: note("sm_ledger_checks"),
                    f_excess: r.note("f_excess").and_then(|v| v.parse().ok()),
                    chain_applies: r.note("chain_applies").and_then(|v| v.parse().ok()),
                    violations: r.invariant_violations.len(),
                    first_violation: r.invariant_violations.first().cloned().unwrap_or_default(),
                    wall_ms: elapsed_ms(start),
                });
            }
        }
        Ok(rows)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShatteringRow {
    pub n: usize,
    pub c: f64,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub t_dagger: usize,
    pub t_star: usize,
    pub largest_initial: usize,
    pub largest_at_t_dagger: usize,
    pub log3n: f64,
    pub ratio_to_initial: f64,
    pub below_log3n: bool,
    pub below_one_percent: bool,
    pub wall_ms: u64,
}

/// Largest component of `G_{t†}` against `(ln n)^3` and against `G_0`.
pub fn run_shattering(cfg: &ExperimentConfig) -> Result<Vec<ShatteringRow>, ExperimentError> {
    refuse_supercritical(cfg)?;
    run_jobs(cfg, |n, c, trial| {
        let start = Instant::now();
        let seed = cfg.trial_seed(trial);
        let g = board(n, c, seed)?;
        let t_dagger = find_t_dagger(cfg.k, c)?;
        let trace = peel(&g, cfg.k, None);
        // after stabilization G_t no longer changes
        let at = |t: usize| trace.per_iteration[t.min(trace.t_star)].largest_component;
        let (initial, shattered) = (at(0), at(t_dagger));
        let ratio = shattered as f64 / initial.max(1) as f64;
        Ok(vec![ShatteringRow {
            n,
            c,
            k: cfg.k,
            trial,
            seed,
            t_dagger,
            t_star: trace.t_star,
            largest_initial: initial,
            largest_at_t_dagger: shattered,
            log3n: log3n(n),
            ratio_to_initial: ratio,
            below_log3n: shattered as f64 <= log3n(n),
            below_one_percent: ratio <= 0.01,
            wall_ms: elapsed_ms(start),
        }])
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationRow {
    pub n: usize,
    pub c: f64,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub t_dagger: usize,
    pub t_star: usize,
    /// `log_{k-1} ln n + 10`.
    pub bound: f64,
    pub within_bound: bool,
    pub wall_ms: u64,
}

pub fn stabilization_bound(k: usize, n: usize) -> f64 {
    (n as f64).ln().ln() / ((k - 1) as f64).ln() + 10.0
}

/// Number of peeling rounds until the graph stops changing.
pub fn run_stabilization(cfg: &ExperimentConfig) -> Result<Vec<StabilizationRow>, ExperimentError> {
    refuse_supercritical(cfg)?;
    if cfg.k < 3 {
        return Err(ExperimentError::Refused("stabilization needs k >= 3".into()));
    }
    run_jobs(cfg, |n, c, trial| {
        let start = Instant::now();
        let seed = cfg.trial_seed(trial);
        let g = board(n, c, seed)?;
        let trace = peel(&g, cfg.k, None);
        let bound = stabilization_bound(cfg.k, n);
        Ok(vec![StabilizationRow {
            n,
            c,
            k: cfg.k,
            trial,
            seed,
            t_dagger: find_t_dagger(cfg.k, c)?,
            t_star: trace.t_star,
            bound,
            within_bound: trace.t_star as f64 <= bound,
            wall_ms: elapsed_ms(start),
        }])
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub n: usize,
    pub c: f64,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub t: usize,
    pub degree: usize,
    pub count: usize,
    pub empirical: f64,
    pub predicted: f64,
    /// Predicted mass at least 0.01, the bins the comparison is made on.
    pub compared: bool,
    pub rel_error: f64,
    pub wall_ms: u64,
}

/// Degree histogram of `G_t` against the prediction for each `t` in the config.
pub fn run_histogram(cfg: &ExperimentConfig) -> Result<Vec<HistogramRow>, ExperimentError> {
    run_jobs(cfg, |n, c, trial| {
        let start = Instant::now();
        let seed = cfg.trial_seed(trial);
        let g = board(n, c, seed)?;
        let t_max = cfg.t.iter().copied().max().unwrap_or(0);
        let trace = peel(&g, cfg.k, Some(t_max));
        let mut rows = Vec::new();
        for &t in &cfg.t {
            let hist = trace.degree_histogram_at(&g, t);
            let pred = predicted_histogram(cfg.k, c, t)?;
            let top = pred.entries.keys().copied().max().unwrap_or(0).max(hist.counts.keys().copied().max().unwrap_or(0));
            for j in 0..=top {
                let count = hist.count(j);
                let empirical = count as f64 / n as f64;
                let predicted = pred.fraction(j);
                if count == 0 && predicted < 1e-12 {
                    continue;
                }
                rows.push(HistogramRow {
                    n,
                    c,
                    k: cfg.k,
                    trial,
                    seed,
                    t,
                    degree: j,
                    count,
                    empirical,
                    predicted,
                    compared: predicted >= 0.01,
                    rel_error: if predicted > 0.0 { (empirical - predicted).abs() / predicted } else { f64::INFINITY },
                    wall_ms: elapsed_ms(start),
                });
            }
        }
        Ok(rows)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreStatsRow {
    pub n: usize,
    pub c: f64,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub core_vertices: usize,
    pub predicted_vertices: f64,
    pub core_edges: usize,
    pub predicted_edges: f64,
    /// Core degree fractions for degrees `k..k+3`, then their predictions.
    pub frac_k: f64,
    pub frac_k1: f64,
    pub frac_k2: f64,
    pub frac_k3: f64,
    pub pred_k: f64,
    pub pred_k1: f64,
    pub pred_k2: f64,
    pub pred_k3: f64,
    pub wall_ms: u64,
}

/// k-core size, edge count and degree profile against the limiting values.
pub fn run_core_stats(cfg: &ExperimentConfig) -> Result<Vec<CoreStatsRow>, ExperimentError> {
    run_jobs(cfg, |n, c, trial| {
        let start = Instant::now();
        let seed = cfg.trial_seed(trial);
        let g = board(n, c, seed)?;
        let cc = core_constants(cfg.k, c)?;
        let z = TruncatedPoisson::new(cfg.k, cc.mu_c)?;
        let core = k_core(&g, cfg.k);
        let mut frac = [0.0; 4];
        for v in 0..core.core.n() {
            let d = core.core.degree(v);
            if (cfg.k..cfg.k + 4).contains(&d) {
                frac[d - cfg.k] += 1.0;
            }
        }
        for f in &mut frac {
            *f /= core.nhat.max(1) as f64;
        }
        let pred: Vec<f64> = (0..4).map(|i| z.pmf(cfg.k + i)).collect();
        Ok(vec![CoreStatsRow {
            n,
            c,
            k: cfg.k,
            trial,
            seed,
            core_vertices: core.nhat,
            predicted_vertices: cc.nhat_frac * n as f64,
            core_edges: core.mhat,
            predicted_edges: cc.mhat_frac * n as f64,
            frac_k: frac[0],
            frac_k1: frac[1],
            frac_k2: frac[2],
            frac_k3: frac[3],
            pred_k: pred[0],
            pred_k1: pred[1],
            pred_k2: pred[2],
            pred_k3: pred[3],
            wall_ms: elapsed_ms(start),
        }])
    })
}
