//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//! Runs without the libtest harness so the lines are always printed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use coregame::engine::{minimax_component_value, Player};
use coregame::experiments::{
    log3n, run_core_stats, run_histogram, run_identity_suite, run_phase_transition, run_shattering,
    run_stabilization, stabilization_bound, ExperimentConfig, PhaseRow,
};
use coregame::graphs::{gen_configuration, DegreeSequence, Graph};
use coregame::numerics::{find_t_dagger, solve_ck};
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(text).unwrap_or_else(|e| panic!("bad acceptance config: {e}\n{text}"))
}

// ---- independent Poisson helpers (plain series, no library code) ----

fn pois_pmf(lambda: f64, j: usize) -> f64 {
    let mut p = (-lambda).exp();
    for i in 1..=j {
        p *= lambda / i as f64;
    }
    p
}

fn pois_ge(lambda: f64, j: usize) -> f64 {
    1.0 - (0..j).map(|i| pois_pmf(lambda, i)).sum::<f64>()
}

/// Largest root of `mu / P[Po(mu) >= k-1] = c` by scanning then bisecting.
fn oracle_mu_c(k: usize, c: f64) -> f64 {
    let h = |mu: f64| mu / pois_ge(mu, k - 1);
    let (mut lo, mut hi) = (0.05, c + 1.0);
    // h decreases then increases; start the bisection right of the minimum
    let mut best = lo;
    let mut x = lo;
    while x < hi {
        if h(x) < h(best) {
            best = x;
        }
        x += 1e-3;
    }
    lo = best;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least `t >= 1` with `c P[Po(c beta_{t-1}) >= k-2] < 1`, where
/// `beta_0 = 1`, `beta_t = P[Po(c beta_{t-1}) >= k-1]`.
fn oracle_t_dagger(k: usize, c: f64) -> usize {
    let mut beta = 1.0;
    for t in 1.. {
        if c * pois_ge(c * beta, k - 2) < 1.0 {
            return t;
        }
        beta = pois_ge(c * beta, k - 1);
    }
    unreachable!()
}

fn median(mut v: Vec<usize>) -> f64 {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    }
}

// ---- criteria ----

fn c1_thresholds() -> Outcome {
    let want = [(3, 3.351), (4, 5.149), (5, 6.799), (6, 8.365)];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (k, v) in want {
        let ck = solve_ck(k).expect("solve_ck");
        worst = worst.max((ck - v).abs());
        parts.push(format!("c_{k}={ck:.4}"));
    }
    outcome(worst <= 1e-3, format!("{}, max |err| {worst:.2e}", parts.join(" ")))
}

fn c2_identities() -> Outcome {
    let report = run_identity_suite();
    let need = [
        "poisson_convolution",
        "poisson_falling_factorial",
        "min_mass_bound",
        "f_at_mu_ck",
        "min_mass_self_test",
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for name in need {
        match report.get(name) {
            Some(c) => {
                pass &= c.passed;
                parts.push(format!("{name} {}/{} ok (max err {:.1e})", c.cases - c.failures, c.cases, c.max_error));
            }
            None => {
                pass = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    let conv = report.get("poisson_convolution").map_or(0, |c| c.cases);
    let grid = report.get("min_mass_bound").map_or(0, |c| c.cases);
    pass &= conv >= 200 && grid > 0;
    outcome(pass, parts.join("; "))
}

fn c3_core_stats() -> Outcome {
    let cfg = config("experiment = core-stats\nk = 3\nc = 3.6\nn = 100000\ntrials = 20\nseed = 3000\n");
    let rows = run_core_stats(&cfg).expect("core-stats run");
    let mu = oracle_mu_c(3, 3.6);
    let n = 100_000.0;
    let vertices = pois_ge(mu, 3) * n;
    let edges = mu * pois_ge(mu, 2) * n / 2.0;
    let z3 = |j: usize| pois_pmf(mu, j) / pois_ge(mu, 3);
    let mut worst: f64 = 0.0;
    for r in &rows {
        let errs = [
            (r.core_vertices as f64 - vertices).abs() / vertices,
            (r.core_edges as f64 - edges).abs() / edges,
            (r.frac_k - z3(3)).abs() / z3(3),
            (r.frac_k1 - z3(4)).abs() / z3(4),
            (r.frac_k2 - z3(5)).abs() / z3(5),
            (r.frac_k3 - z3(6)).abs() / z3(6),
        ];
        worst = errs.into_iter().fold(worst, f64::max);
    }
    let lib_gap = rows.first().map_or(f64::INFINITY, |r| (r.predicted_vertices - vertices).abs() / vertices);
    outcome(
        rows.len() == 20 && worst <= 0.10 && lib_gap < 1e-6,
        format!(
            "20 trials, predicted core {vertices:.0} vertices / {edges:.0} edges, worst relative error {worst:.3}"
        ),
    )
}

fn c4_histogram() -> Outcome {
    let cfg = config("experiment = histogram\nk = 3\nc = 3.0\nn = 100000\nt = 1, 2, 3\nseed = 4000\n");
    let rows = run_histogram(&cfg).expect("histogram run");
    let compared: Vec<_> = rows.iter().filter(|r| r.compared).collect();
    let worst = compared.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    let ts: BTreeSet<usize> = compared.iter().map(|r| r.t).collect();
    let zero_bins = compared.iter().filter(|r| r.degree == 0).count();
    outcome(
        worst <= 0.10 && ts.len() == 3 && zero_bins == 3,
        format!("{} bins with mass >= 0.01 over t = 1,2,3, worst relative error {worst:.4}", compared.len()),
    )
}

fn c5_shattering() -> Outcome {
    let cfg = config("experiment = shattering\nk = 3\nc = 3.0\nn = 100000\ntrials = 20\nseed = 5000\n");
    let rows = run_shattering(&cfg).expect("shattering run");
    let t_dagger = find_t_dagger(3, 3.0).expect("t dagger");
    let oracle = oracle_t_dagger(3, 3.0);
    let good = rows.iter().filter(|r| r.below_log3n && r.below_one_percent).count();
    let largest = rows.iter().map(|r| r.largest_at_t_dagger).max().unwrap_or(0);
    outcome(
        t_dagger == oracle && rows.len() == 20 && good * 10 >= rows.len() * 9,
        format!(
            "t_dagger = {t_dagger} (oracle {oracle}), {good}/20 trials pass, largest at t_dagger {largest} vs log^3 n = {:.0}",
            log3n(100_000)
        ),
    )
}

fn c6_stabilization() -> Outcome {
    let cfg = config("experiment = stabilization\nk = 3\nc = 3.0\nn = 10000, 100000, 1000000\ntrials = 10\nseed = 6000\n");
    let rows = run_stabilization(&cfg).expect("stabilization run");
    let all_within = rows.iter().all(|r| r.within_bound && (r.t_star as f64) <= stabilization_bound(3, r.n));
    let mut by_n: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for r in &rows {
        by_n.entry(r.n).or_default().push(r.t_star);
    }
    let medians: Vec<(usize, f64)> = by_n.into_iter().map(|(n, v)| (n, median(v))).collect();
    let monotone = medians.windows(2).all(|w| w[0].1 <= w[1].1);
    let max = rows.iter().map(|r| r.t_star).max().unwrap_or(0);
    outcome(
        rows.len() == 30 && all_within && monotone,
        format!(
            "medians {}, max T* {max}, bound at 10^6 {:.2}",
            medians.iter().map(|(n, m)| format!("n={n}: {m}")).collect::<Vec<_>>().join(", "),
            stabilization_bound(3, 1_000_000)
        ),
    )
}

struct GameRuns {
    subcritical: Vec<PhaseRow>,
    supercritical: Vec<PhaseRow>,
}

fn c7_phase_transition() -> (Outcome, GameRuns) {
    let sub = run_phase_transition(&config(
        "experiment = phase-transition\nb = 1\nc = 3.0\nn = 10000\ntrials = 50\nseed = 7000\nmakers = naive, random\nbreakers = sb\nfirst = maker\n",
    ))
    .expect("subcritical run");
    let sup = run_phase_transition(&config(
        "experiment = phase-transition\nb = 1\nc = 4.0\nn = 10000\ntrials = 50\nseed = 7100\nmakers = two-phase\nbreakers = sb, random\nfirst = breaker\nN = 3\n",
    ))
    .expect("supercritical run");
    let mut pass = true;
    let mut parts = Vec::new();
    for maker in ["naive", "random"] {
        let rows: Vec<_> = sub.iter().filter(|r| r.maker == maker).collect();
        let ok = rows.iter().filter(|r| r.below_log3n).count();
        let worst = rows.iter().map(|r| r.largest_component).max().unwrap_or(0);
        pass &= rows.len() == 50 && ok * 10 >= rows.len() * 9;
        parts.push(format!("c=3 {maker} vs sb {ok}/50 <= {:.0} (max {worst})", log3n(10_000)));
    }
    for breaker in ["sb", "random"] {
        let rows: Vec<_> = sup.iter().filter(|r| r.breaker == breaker).collect();
        let ok = rows.iter().filter(|r| r.reached_linear).count();
        let med = median(rows.iter().map(|r| r.largest_component).collect());
        pass &= rows.len() == 50 && ok * 10 >= rows.len() * 8;
        parts.push(format!("c=4 two-phase vs {breaker} {ok}/50 >= 50 (median {med})"));
    }
    (outcome(pass, parts.join("; ")), GameRuns { subcritical: sub, supercritical: sup })
}

/// Exhaustive game value with Breaker choosing whole `b`-sets and components
/// found by search: shares nothing with the memoized oracle.
fn brute_value(g: &Graph, b: usize, owner: &mut Vec<u8>, player: Player) -> usize {
    let free: Vec<usize> = (0..g.m()).filter(|&e| owner[e] == 0).collect();
    if free.is_empty() {
        return largest_by_search(g, owner);
    }
    match player {
        Player::Maker => free
            .iter()
            .map(|&e| {
                owner[e] = 1;
                let v = brute_value(g, b, owner, Player::Breaker);
                owner[e] = 0;
                v
            })
            .max()
            .unwrap(),
        Player::Breaker => {
            let take = b.min(free.len());
            let mut best = usize::MAX;
            for mask in 0u32..(1 << free.len()) {
                if mask.count_ones() as usize != take {
                    continue;
                }
                let chosen: Vec<usize> = (0..free.len()).filter(|i| mask >> i & 1 == 1).map(|i| free[i]).collect();
                for &e in &chosen {
                    owner[e] = 2;
                }
                best = best.min(brute_value(g, b, owner, Player::Maker));
                for &e in &chosen {
                    owner[e] = 0;
                }
            }
            best
        }
    }
}

fn largest_by_search(g: &Graph, owner: &[u8]) -> usize {
    let mut seen = vec![false; g.n()];
    let mut best = 0;
    for s in 0..g.n() {
        let touched = g.incident(s).iter().any(|&e| owner[e] == 1);
        if seen[s] || !touched {
            continue;
        }
        let mut stack = vec![s];
        seen[s] = true;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &e in g.incident(v) {
                let w = g.other(e, v);
                if owner[e] == 1 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// Connected simple graphs with 1..=5 edges, one per isomorphism class.
fn small_connected_graphs() -> Vec<Graph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for v in 2..=6usize {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let perms = permutations(v);
        for mask in 1u32..(1 << pairs.len()) {
            let m = mask.count_ones() as usize;
            if m > 5 || m + 1 < v {
                continue;
            }
            let edges: Vec<(usize, usize)> = (0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            let g = Graph::new(v, edges.clone()).expect("valid graph");
            if !connected_spanning(&g) {
                continue;
            }
            let canon = perms
                .iter()
                .map(|p| {
                    let mut e: Vec<(usize, usize)> =
                        edges.iter().map(|&(a, b)| (p[a].min(p[b]), p[a].max(p[b]))).collect();
                    e.sort_unstable();
                    e
                })
                .min()
                .unwrap();
            if seen.insert((v, canon)) {
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected_spanning(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &e in g.incident(v) {
            let w = g.other(e, v);
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn c8_oracle() -> Outcome {
    let graphs = small_connected_graphs();
    let mut cases = 0;
    let mut mismatches = Vec::new();
    for g in &graphs {
        for b in [1, 2] {
            for first in [Player::Maker, Player::Breaker] {
                let fast = minimax_component_value(g, b, first).expect("oracle");
                let slow = brute_value(g, b, &mut vec![0; g.m()], first);
                cases += 1;
                if fast != slow {
                    mismatches.push(format!("{:?} b={b} first={first}: {fast} vs {slow}", g.edges()));
                }
            }
        }
    }
    let k3 = minimax_component_value(&Graph::complete(3), 1, Player::Maker).expect("K3");
    let p3 = minimax_component_value(&Graph::path(3), 1, Player::Maker).expect("P3");
    outcome(
        mismatches.is_empty() && graphs.len() == 22 && k3 == 3 && p3 == 2,
        format!(
            "{} graphs, {cases} cases, {} mismatches{}; s*(K3) = {k3}, s*(P3) = {p3}",
            graphs.len(),
            mismatches.len(),
            mismatches.first().map_or(String::new(), |m| format!(" (first: {m})"))
        ),
    )
}

fn c9_invariants(runs: &GameRuns) -> Outcome {
    let extra_b1 = run_phase_transition(&config(
        "experiment = phase-transition\nb = 1\nc = 2.5, 3.0, 3.3\nn = 10000\ntrials = 84\nseed = 9000\nmakers = naive, random\nbreakers = sb\nfirst = maker\n",
    ))
    .expect("b = 1 invariant run");
    let extra_b2 = run_phase_transition(&config(
        "experiment = phase-transition\nb = 2\nc = 4.0, 5.0\nn = 10000\ntrials = 124\nseed = 9100\nmakers = naive, random\nbreakers = sb\nfirst = maker\n",
    ))
    .expect("b = 2 invariant run");
    // full recount after every Breaker reply on smaller boards
    let full = run_phase_transition(&config(
        "experiment = phase-transition\nb = 1\nc = 3.0\nn = 2000\ntrials = 25\nseed = 9200\nmakers = naive, random\nbreakers = sb\nfirst = maker\nchecks = full\n",
    ))
    .expect("full-check run");
    let sub: Vec<&PhaseRow> = extra_b1.iter().chain(&extra_b2).chain(&full).collect();
    let sub_violations: usize = sub.iter().map(|r| r.violations).sum();
    let sub_first = sub.iter().find(|r| r.violations > 0).map(|r| r.first_violation.clone());

    let sup = &runs.supercritical;
    let sup_violations: usize = sup.iter().map(|r| r.violations).sum();
    let sup_first = sup.iter().find(|r| r.violations > 0).map(|r| r.first_violation.clone());
    let sapling: Vec<_> = sup.iter().filter(|r| r.maker_degraded == "no").collect();
    let ledger_checks: usize = sapling.iter().filter_map(|r| r.sm_ledger_checks).sum();
    let ledger_everywhere = sapling.iter().all(|r| r.sm_ledger_checks.unwrap_or(0) > 0);
    let chains = sup.iter().filter(|r| r.f_excess.is_some()).count();
    let from_c7: usize = runs.subcritical.iter().map(|r| r.violations).sum();

    let games = sub.len() - full.len();
    outcome(
        games >= 1000 && sub_violations == 0 && from_c7 == 0 && sup_violations == 0 && ledger_everywhere && chains > 0,
        format!(
            "{games} subcritical games + {} fully rechecked + {} from criterion 7: {} violations; {} sapling games, {ledger_checks} ledger checks; {chains} 2-core chains checked; supercritical violations {sup_violations}{}",
            full.len(),
            runs.subcritical.len(),
            sub_violations + from_c7,
            sapling.len(),
            sub_first.or(sup_first).map_or(String::new(), |v| format!(" (first: {v})"))
        ),
    )
}

fn c10_configuration() -> Outcome {
    let draws = 100_000u64;
    let pair = DegreeSequence::new(vec![2, 2]);
    let doubles: usize = (0..draws)
        .into_par_iter()
        .map(|s| {
            let g = gen_configuration(&pair, s).expect("configuration");
            usize::from(g.edges().iter().all(|&(u, v)| u != v))
        })
        .sum();
    let p_hat = doubles as f64 / draws as f64;
    let se = (2.0 / 3.0 * (1.0 / 3.0) / draws as f64).sqrt();
    let z = (p_hat - 2.0 / 3.0).abs() / se;

    let cubic = DegreeSequence::new(vec![3; 20]);
    let tries = 40_000u64;
    let simple: usize = (0..tries)
        .into_par_iter()
        .map(|s| usize::from(gen_configuration(&cubic, 1_000_000 + s).expect("configuration").is_simple()))
        .sum();
    let rate = simple as f64 / tries as f64;
    let rel = rate / (-2.0f64).exp() - 1.0;
    outcome(
        z <= 4.0 && rel.abs() <= 0.20,
        format!(
            "(2,2): double edge {p_hat:.4} vs 2/3 ({z:.2} SE); 3-regular n=20 simple rate {rate:.4} vs e^-2 ({:+.1}%)",
            rel * 100.0
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |id: usize, name: &str, limit: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let took = start.elapsed();
        let in_time = took <= limit;
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "criterion {id:>2} {name}: {} ({}; {:.1}s of {}s{})",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            took.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", over time" }
        );
    };
    let secs = Duration::from_secs;
    report(1, "threshold table", secs(1), &mut c1_thresholds);
    report(2, "numeric identities", secs(5), &mut c2_identities);
    report(3, "k-core statistics", secs(120), &mut c3_core_stats);
    report(4, "peeling histogram", secs(120), &mut c4_histogram);
    report(5, "shattering", secs(120), &mut c5_shattering);
    report(6, "stabilization time", secs(300), &mut c6_stabilization);
    let mut runs = None;
    report(7, "game phase transition", secs(600), &mut || {
        let (o, r) = c7_phase_transition();
        runs = Some(r);
        o
    });
    report(8, "oracle equivalence", secs(60), &mut c8_oracle);
    // shares criterion 7's time budget
    let runs = runs.expect("criterion 7 ran");
    report(9, "invariant suites", secs(600), &mut || c9_invariants(&runs));
    report(10, "configuration model", secs(30), &mut c10_configuration);
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
