use std::collections::HashSet;

use super::rank::{build_rank_table, EdgeClass, RankTable};
use super::tracker::{HCompSummary, HCompTracker};
use crate::dsu::DisjointSets;
use crate::engine::{lowest_free_edges, GameState, Owner, Player, Strategy};
use crate::error::GameError;
use crate::graphs::Graph;

/// How much invariant checking `SbStrategy` does while playing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Off,
    /// After each of Breaker's replies, check the component Maker just
    /// played into using the tracker; full recount once at the end.
    Touched,
    /// Full recount from scratch after every Breaker reply.
    Full,
}

/// Breaker's strategy: answer Maker's edge `uv` (`rho(u) <= rho(v)`) by
/// claiming from `F_V(C)`, then `F_H(C)`, then anywhere, where `C` is the
/// H-comp of `u`. Lowest edge id within each class.
#[derive(Debug, Clone)]
pub struct SbStrategy {
    table: RankTable,
    tracker: HCompTracker,
    refined: bool,
    mode: CheckMode,
    violations: Vec<String>,
    checks: usize,
    skipped_infinite: usize,
    fallback_claims: usize,
}

impl SbStrategy {
    pub fn new(board: &Graph, b: usize) -> Self {
        Self::with_table(board, build_rank_table(board, b))
    }

    pub fn with_table(board: &Graph, table: RankTable) -> Self {
        let tracker = HCompTracker::new(board, &table);
        Self {
            table,
            tracker,
            refined: false,
            mode: CheckMode::Touched,
            violations: Vec::new(),
            checks: 0,
            skipped_infinite: 0,
            fallback_claims: 0,
        }
    }

    /// Take `F_H(C)` before `F_V(C)` whenever `|F_V(C)| > b`.
    pub fn refined(mut self, on: bool) -> Self {
        self.refined = on;
        self
    }

    pub fn check_mode(mut self, mode: CheckMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn table(&self) -> &RankTable {
        &self.table
    }

    pub fn tracker(&mut self) -> &mut HCompTracker {
        &mut self.tracker
    }

    /// Lower-rank endpoint of Maker's edge in the latest round, if Maker has moved.
    fn anchor(&self, state: &GameState<'_>) -> Option<usize> {
        let mv = state.last_move_of(Player::Maker)?;
        let e = *mv.edges.first()?;
        let (u, _) = state.board().edge(e);
        Some(match self.table.class(e) {
            EdgeClass::Horizontal => u,
            EdgeClass::Vertical { lower } => lower,
        })
    }

    fn record(&mut self, round: usize, found: Vec<String>) {
        self.violations
            .extend(found.into_iter().map(|v| format!("after move {round}: {v}")));
    }
}

impl Strategy for SbStrategy {
    fn name(&self) -> String {
        if self.refined { "sb-refined" } else { "sb" }.into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        self.tracker.sync(state);
        let mut picks = Vec::with_capacity(count);
        let anchor = match state.moves().last() {
            Some(mv) if mv.player == Player::Maker => self.anchor(state),
            Some(_) => {
                return Err(GameError::Protocol {
                    player: "breaker".into(),
                    reason: "Maker's last move not found".into(),
                })
            }
            None => None,
        };
        if let Some(u) = anchor {
            let fv = self.tracker.summary(u).free_vertical;
            let order = if self.refined && fv > state.b() { [false, true] } else { [true, false] };
            for vertical in order {
                while picks.len() < count {
                    match self.tracker.lowest_free_in(u, vertical, &picks) {
                        Some(e) => picks.push(e),
                        None => break,
                    }
                }
            }
        }
        if picks.len() < count {
            let rest = lowest_free_edges(state, count - picks.len(), &picks);
            self.fallback_claims += rest.len();
            picks.extend(rest);
        }
        Ok(picks)
    }

    fn observe(&mut self, state: &GameState<'_>) {
        self.tracker.sync(state);
        if self.mode == CheckMode::Off {
            return;
        }
        let moves = state.moves();
        let game_over = state.free_count() == 0;
        let breaker_replied = moves.len() >= 2
            && moves[moves.len() - 1].player == Player::Breaker
            && moves[moves.len() - 2].player == Player::Maker;
        if breaker_replied && self.mode == CheckMode::Touched {
            if let Some(u) = self.anchor(state) {
                let s = self.tracker.summary(u);
                self.checks += 1;
                if s.rank.is_finite() {
                    if let Some(v) = summary_violation(&s, state.b()) {
                        self.record(moves.len(), vec![v]);
                    }
                } else {
                    self.skipped_infinite += 1;
                }
            }
        }
        if (breaker_replied && self.mode == CheckMode::Full) || (game_over && self.mode == CheckMode::Touched) {
            let report = check_hcomp_invariants(state, &self.table);
            self.checks += 1;
            self.skipped_infinite += report.skipped_infinite;
            self.record(moves.len(), report.violations);
        }
    }

    fn violations(&self) -> Vec<String> {
        self.violations.clone()
    }

    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("sb_checks".into(), self.checks.to_string()),
            ("sb_skipped_infinite_rank".into(), self.skipped_infinite.to_string()),
            ("sb_fallback_claims".into(), self.fallback_claims.to_string()),
        ]
    }
}

pub fn sb_strategy(board: &Graph, b: usize) -> SbStrategy {
    SbStrategy::new(board, b)
}

fn summary_violation(s: &HCompSummary, b: usize) -> Option<String> {
    let f = s.free_total();
    let case_i = s.above == 1 && f == 0;
    let case_ii = s.above == 0 && f <= (b + 2).saturating_sub(s.size);
    let mut problems = Vec::new();
    if !(case_i || case_ii) {
        problems.push("neither case (i) nor case (ii) holds");
    }
    if s.size > 2 * (b + 1) {
        problems.push("size exceeds 2(b+1)");
    }
    (!problems.is_empty()).then(|| {
        format!(
            "H-comp at {} (rank {}, size {}, above {}, |F| {}): {}",
            s.root,
            s.rank,
            s.size,
            s.above,
            f,
            problems.join("; ")
        )
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HCompCheck {
    pub violations: Vec<String>,
    pub components: usize,
    /// Components of infinite rank, for which the invariants do not apply.
    pub skipped_infinite: usize,
}

/// Recomputes every H-comp, its `F(C)` and the Maker edges above it from
/// the ownership vector alone, and checks cases (i)/(ii) and the size bound.
pub fn check_hcomp_invariants(state: &GameState<'_>, table: &RankTable) -> HCompCheck {
    let summaries = recount_hcomps(state, table);
    let mut out = HCompCheck::default();
    for s in summaries {
        out.components += 1;
        if !s.rank.is_finite() {
            out.skipped_infinite += 1;
            continue;
        }
        if let Some(v) = summary_violation(&s, state.b()) {
            out.violations.push(v);
        }
    }
    out
}

/// H-comp summaries computed from scratch, keyed by the smallest member.
pub fn recount_hcomps(state: &GameState<'_>, table: &RankTable) -> Vec<HCompSummary> {
    let board = state.board();
    let n = board.n();
    let mut dsu = DisjointSets::new(n);
    for (e, &(u, v)) in board.edges().iter().enumerate() {
        if state.owner(e) == Owner::Maker && table.class(e) == EdgeClass::Horizontal {
            dsu.union(u, v);
        }
    }
    let mut rep = vec![usize::MAX; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        let r = dsu.find(v);
        rep[r] = rep[r].min(v);
        size[r] += 1;
    }
    let mut above = vec![0usize; n];
    let mut fv: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    let mut fh: Vec<HashSet<usize>> = vec![HashSet::new(); n];
    for (e, &(u, v)) in board.edges().iter().enumerate() {
        match (table.class(e), state.owner(e)) {
            (EdgeClass::Vertical { lower }, Owner::Maker) => above[dsu.find(lower)] += 1,
            (EdgeClass::Vertical { lower }, Owner::Free) => {
                fv[dsu.find(lower)].insert(e);
            }
            (EdgeClass::Horizontal, Owner::Free) => {
                fh[dsu.find(u)].insert(e);
                fh[dsu.find(v)].insert(e);
            }
            _ => {}
        }
    }
    let mut out: Vec<HCompSummary> = (0..n)
        .filter(|&v| dsu.find(v) == v)
        .map(|r| HCompSummary {
            root: rep[r],
            rank: table.rank(r),
            size: size[r],
            above: above[r],
            free_vertical: fv[r].len(),
            free_horizontal: fh[r].len(),
        })
        .collect();
    out.sort_by_key(|s| s.root);
    out
}

/// Result of contracting every H-comp inside each Maker component.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContractionReport {
    pub violations: Vec<String>,
    pub components_checked: usize,
    pub max_height: usize,
}

/// Contracts the H-comps of every Maker component and checks that the
/// result is a tree whose height, rooted at the H-comp of largest rank, is
/// at most that rank. Components touching an infinite rank are skipped.
pub fn check_contraction_tree(state: &GameState<'_>, table: &RankTable) -> ContractionReport {
    let board = state.board();
    let n = board.n();
    let mut hdsu = DisjointSets::new(n);
    let mut mdsu = DisjointSets::new(n);
    let mut touched = vec![false; n];
    for (e, &(u, v)) in board.edges().iter().enumerate() {
        if state.owner(e) == Owner::Maker {
            mdsu.union(u, v);
            touched[u] = true;
            touched[v] = true;
            if table.class(e) == EdgeClass::Horizontal {
                hdsu.union(u, v);
            }
        }
    }
    // contracted adjacency: H-comp root -> (neighbor H-comp root), per Maker component
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edge_count = vec![0usize; n];
    for (e, &(u, v)) in board.edges().iter().enumerate() {
        if state.owner(e) == Owner::Maker && table.class(e) != EdgeClass::Horizontal {
            let (a, b) = (hdsu.find(u), hdsu.find(v));
            adj[a].push(b);
            adj[b].push(a);
            edge_count[mdsu.find(u)] += 1;
        }
    }
    let mut nodes: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut infinite = vec![false; n];
    for v in 0..n {
        if touched[v] {
            if !table.rank(v).is_finite() {
                infinite[mdsu.find(v)] = true;
            }
            if hdsu.find(v) == v {
                nodes[mdsu.find(v)].push(v);
            }
        }
    }
    let mut report = ContractionReport::default();
    for m in 0..n {
        if nodes[m].is_empty() || infinite[m] {
            continue;
        }
        report.components_checked += 1;
        if edge_count[m] + 1 != nodes[m].len() {
            report.violations.push(format!(
                "Maker component at {m}: {} H-comps joined by {} vertical edges, not a tree",
                nodes[m].len(),
                edge_count[m]
            ));
            continue;
        }
        let root = *nodes[m]
            .iter()
            .max_by_key(|&&c| (table.rank(c), std::cmp::Reverse(c)))
            .expect("nonempty");
        let root_rank = table.rank(root).value().expect("finite") as usize;
        let mut depth = std::collections::HashMap::from([(root, 0usize)]);
        let mut stack = vec![root];
        let mut height = 0;
        while let Some(x) = stack.pop() {
            let d = depth[&x];
            height = height.max(d);
            for &y in &adj[x] {
                if !depth.contains_key(&y) {
                    depth.insert(y, d + 1);
                    stack.push(y);
                }
            }
        }
        report.max_height = report.max_height.max(height);
        if height > root_rank {
            report.violations.push(format!(
                "Maker component at {m}: contracted tree height {height} exceeds root rank {root_rank}"
            ));
        }
    }
    report
}
