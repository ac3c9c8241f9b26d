use super::naive::{max_degree_vertex, NaiveStrategy};
use super::nltree::{find_nl_tree_with_restarts, NLTree};
use super::sapling::SmStrategy;
use crate::engine::{GameState, Player, Strategy};
use crate::error::GameError;
use crate::graphs::Graph;
use crate::numerics::{core_constants, default_height, TreeParams};
use crate::peeling::{k_core, two_core_sequential, CoreResult};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhaseConfig {
    /// Nominal average degree for the constant formulas; the board's own
    /// average degree when absent.
    pub c: Option<f64>,
    pub height: Option<usize>,
    pub l: Option<usize>,
    pub d0: Option<usize>,
    /// Start vertices the finder may try.
    pub restarts: usize,
}

impl Default for TwoPhaseConfig {
    fn default() -> Self {
        Self { c: None, height: None, l: None, d0: None, restarts: 10 }
    }
}

/// Tree parameters for a board: `N`, `L`, `d0` from the formulas, with
/// overrides applied. `None` when a value is missing and the formulas do
/// not apply (average degree at or below `c_k`).
pub fn tree_params_for(board: &Graph, k: usize, config: &TwoPhaseConfig) -> Option<TreeParams> {
    let c = config.c.unwrap_or_else(|| {
        if board.n() == 0 {
            0.0
        } else {
            2.0 * board.m() as f64 / board.n() as f64
        }
    });
    match core_constants(k, c) {
        Ok(cc) => Some(TreeParams::from_constants(&cc, board.n()).with_overrides(config.height, config.l, config.d0)),
        Err(_) => match (config.l, config.d0) {
            (Some(l), Some(d0)) => Some(TreeParams {
                height: config.height.unwrap_or_else(|| default_height(board.n())),
                l,
                d0,
            }),
            _ => None,
        },
    }
}

/// Bookkeeping on `F = K[V(T)]` once Maker's tree stops growing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcessReport {
    pub vertices: usize,
    pub edges: usize,
    pub boundary: usize,
    /// Vertices of `T` with core degree at least `b + 3`.
    pub heavy: usize,
    pub two_core_vertices: usize,
    pub two_core_excess: i64,
    /// Whether `|∂F| <= b|V(F)|` and `exc(F) >= 0`, so the 2-core chain applies.
    pub chain_applies: bool,
}

impl ExcessReport {
    pub fn excess(&self) -> i64 {
        self.edges as i64 - self.vertices as i64
    }
}

#[derive(Debug, Clone)]
enum Phase {
    Sapling(Box<SmStrategy>),
    Naive(NaiveStrategy),
}

/// Maker's strategy for supercritical boards: phase 1 plays the sapling
/// strategy on an (N,L)-tree of the `(b+2)`-core, phase 2 grows the same
/// tree naively inside the core. Without a tree it runs phase 2 alone from
/// a highest-degree core vertex and reports itself degraded.
#[derive(Debug, Clone)]
pub struct TwoPhaseStrategy {
    b: usize,
    core: CoreResult,
    /// Board id to core id.
    core_index: Vec<Option<usize>>,
    params: Option<TreeParams>,
    phase: Phase,
    degraded: Option<String>,
    finder_attempts: usize,
    tree_size: usize,
    phase1_violations: Vec<String>,
    phase1_notes: Vec<(String, String)>,
    report: Option<ExcessReport>,
    violations: Vec<String>,
}

impl TwoPhaseStrategy {
    pub fn new(board: &Graph, b: usize, seed: u64, config: &TwoPhaseConfig) -> Result<Self, GameError> {
        if b == 0 {
            return Err(GameError::Domain("bias must be at least 1".into()));
        }
        let k = b + 2;
        let core = k_core(board, k);
        let mut core_index = vec![None; board.n()];
        for (i, &v) in core.vertex_map.iter().enumerate() {
            core_index[v] = Some(i);
        }
        let params = tree_params_for(board, k, config);
        let mut attempts = 0;
        let mut degraded = None;
        let mut tree: Option<NLTree> = None;
        if core.nhat == 0 {
            degraded = Some("empty core".to_string());
        } else if let Some(p) = &params {
            let run = find_nl_tree_with_restarts(&core.core, k, p, seed, config.restarts)?;
            attempts = run.attempts;
            match run.tree {
                Some(t) => tree = Some(t.relabel(&core.vertex_map, &core.edge_map)),
                None => degraded = Some("no tree found".to_string()),
            }
        } else {
            degraded = Some("no tree parameters".to_string());
        }
        let tree_size = tree.as_ref().map_or(0, |t| t.len());
        let phase = match tree {
            Some(t) => Phase::Sapling(Box::new(SmStrategy::new(t, b)?)),
            None => {
                let (allowed, pool) = if core.nhat > 0 {
                    let allowed: Vec<bool> = core_index.iter().map(|x| x.is_some()).collect();
                    (allowed, core.vertex_map.clone())
                } else {
                    (vec![true; board.n()], (0..board.n()).collect())
                };
                let start = max_degree_vertex(board, &pool).unwrap_or(0);
                Phase::Naive(NaiveStrategy::new(board, allowed, start))
            }
        };
        Ok(Self {
            b,
            core,
            core_index,
            params,
            phase,
            degraded,
            finder_attempts: attempts,
            tree_size,
            phase1_violations: Vec::new(),
            phase1_notes: Vec::new(),
            report: None,
            violations: Vec::new(),
        })
    }

    pub fn degraded(&self) -> Option<&str> {
        self.degraded.as_deref()
    }

    pub fn params(&self) -> Option<TreeParams> {
        self.params
    }

    pub fn report(&self) -> Option<&ExcessReport> {
        self.report.as_ref()
    }

    fn switch_to_naive(&mut self, state: &GameState<'_>) {
        if let Phase::Sapling(sm) = &self.phase {
            self.phase1_violations = sm.violations();
            self.phase1_notes = sm.notes();
            let allowed: Vec<bool> = self.core_index.iter().map(|x| x.is_some()).collect();
            let mut naive = NaiveStrategy::with_tree(state.board(), allowed, &sm.tree_host_vertices());
            naive.observe(state);
            self.phase = Phase::Naive(naive);
        }
    }

    /// Excess and boundary of `F = K[V(T)]`, the degree-sum bound, and the
    /// 2-core chain.
    fn evaluate(&mut self, tree: &[usize]) {
        if self.core.nhat == 0 || tree.is_empty() {
            return;
        }
        let mut subset = Vec::with_capacity(tree.len());
        for &v in tree {
            match self.core_index[v] {
                Some(i) => subset.push(i),
                None => {
                    self.violations.push(format!("tree vertex {v} is outside the core"));
                    return;
                }
            }
        }
        let k = self.b + 2;
        let heavy = subset.iter().filter(|&&i| self.core.core.degree(i) > k).count();
        let chain = two_core_sequential(&self.core.core, &subset);
        let first = chain.chain[0];
        let report = ExcessReport {
            vertices: first.vertices,
            edges: first.edges,
            boundary: first.boundary,
            heavy,
            two_core_vertices: chain.two_core.n(),
            two_core_excess: chain.excess,
            chain_applies: first.boundary <= self.b * first.vertices && first.excess() >= 0,
        };
        // 2|E(F)| = sum of core degrees - |∂F| >= (b+2)|V| + heavy - |∂F|
        let lhs = 2 * report.excess();
        let rhs = (self.b * report.vertices + heavy) as i64 - report.boundary as i64;
        if lhs < rhs {
            self.violations.push(format!("2 exc(F) = {lhs} below the degree-sum bound {rhs}"));
        }
        if report.boundary <= self.b * report.vertices && lhs < heavy as i64 {
            self.violations.push(format!("closed tree: 2 exc(F) = {lhs} < {heavy} heavy vertices"));
        }
        if let Err(e) = chain.check_chain(self.b) {
            self.violations.push(format!("2-core chain: {e}"));
        }
        self.report = Some(report);
    }

    fn maybe_evaluate(&mut self, state: &GameState<'_>) {
        if self.report.is_some() {
            return;
        }
        if let Phase::Naive(naive) = &self.phase {
            if naive.exhausted_at().is_some() || state.free_count() == 0 {
                let tree = naive.tree_vertices().to_vec();
                self.evaluate(&tree);
            }
        }
    }
}

impl Strategy for TwoPhaseStrategy {
    fn name(&self) -> String {
        "two-phase".into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        if let Phase::Sapling(sm) = &mut self.phase {
            if let Some(e) = sm.select(state) {
                if count == 1 {
                    return Ok(vec![e]);
                }
            }
            self.switch_to_naive(state);
        }
        let out = match &mut self.phase {
            Phase::Naive(naive) => naive.next_moves(state, count),
            Phase::Sapling(_) => unreachable!("switched above"),
        };
        self.maybe_evaluate(state);
        out
    }

    fn observe(&mut self, state: &GameState<'_>) {
        match &mut self.phase {
            Phase::Sapling(sm) => sm.observe(state),
            Phase::Naive(naive) => naive.observe(state),
        }
        if state.turn() == Player::Maker || state.free_count() == 0 {
            self.maybe_evaluate(state);
        }
    }

    fn violations(&self) -> Vec<String> {
        let mut out = match &self.phase {
            Phase::Sapling(sm) => sm.violations(),
            Phase::Naive(_) => self.phase1_violations.clone(),
        };
        out.extend(self.violations.iter().cloned());
        out
    }

    fn notes(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("maker_degraded".into(), self.degraded.clone().unwrap_or_else(|| "no".into())),
            ("finder_attempts".into(), self.finder_attempts.to_string()),
            ("nl_tree_vertices".into(), self.tree_size.to_string()),
        ];
        if let Some(p) = self.params {
            out.push(("N".into(), p.height.to_string()));
            out.push(("L".into(), p.l.to_string()));
            out.push(("d0".into(), p.d0.to_string()));
        }
        match &self.phase {
            Phase::Sapling(sm) => out.extend(sm.notes()),
            Phase::Naive(naive) => {
                out.extend(self.phase1_notes.iter().cloned());
                out.extend(naive.notes());
            }
        }
        if let Some(r) = &self.report {
            out.push(("f_vertices".into(), r.vertices.to_string()));
            out.push(("f_excess".into(), r.excess().to_string()));
            out.push(("f_boundary".into(), r.boundary.to_string()));
            out.push(("f_heavy".into(), r.heavy.to_string()));
            out.push(("two_core_excess".into(), r.two_core_excess.to_string()));
            out.push(("chain_applies".into(), r.chain_applies.to_string()));
        }
        out
    }
}

pub fn two_phase_strategy(board: &Graph, b: usize, seed: u64) -> Result<TwoPhaseStrategy, GameError> {
    TwoPhaseStrategy::new(board, b, seed, &TwoPhaseConfig::default())
}
