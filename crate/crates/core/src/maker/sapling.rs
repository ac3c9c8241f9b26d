use std::collections::HashMap;

use super::nltree::NLTree;
use crate::dsu::DisjointSets;
use crate::engine::{lowest_free_edges, GameState, Player, Strategy};
use crate::error::GameError;
use crate::numerics::tree_constant;

/// Snapshot of the phase-1 bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaplingState {
    /// Tree vertices (indices into the `NLTree`) in Maker's tree `T`.
    pub tree_vertices: Vec<usize>,
    /// Vertices of `T` that are heavy in the tree being played on.
    pub heavy_count: usize,
    /// Unclaimed boundary edges of `T` in the restricted game.
    pub free_count: usize,
    /// Lowest level among free boundary edges below the leaf level.
    pub frontier_level: Option<usize>,
    pub rounds: usize,
}

/// Lower bound `(2^floor((N-1)/(C(L+1))) - 1) C` on the heavy vertices in
/// `T` at the end of phase 1, with `C = 1 + k^(L+1)`.
pub fn heavy_lower_bound(k: usize, height: usize, l: usize) -> u64 {
    let Some(c) = tree_constant(k, l) else {
        return 0;
    };
    let Some(span) = c.checked_mul(l as u64 + 1) else {
        return 0;
    };
    let i = (height.saturating_sub(1) as u64) / span;
    let pow = u32::try_from(i).ok().and_then(|i| 1u64.checked_shl(i)).unwrap_or(u64::MAX);
    (pow - 1).saturating_mul(c)
}

/// Maker's phase-1 strategy on a simple (N,L)-tree: claim a free boundary
/// edge of minimum level below `N` (lowest id among those).
///
/// Breaker's real moves are mapped onto the restricted game played on the
/// tree's edges: a boundary edge counts as itself; an edge deeper in the
/// tree counts as the boundary edge above it; anything else, or a boundary
/// edge already taken, counts as the lowest-id free boundary edge. The
/// free-edge ledger is checked against this restricted game before every
/// Maker move.
#[derive(Debug, Clone)]
pub struct SmStrategy {
    tree: NLTree,
    b: usize,
    edge_child: HashMap<usize, usize>,
    in_t: Vec<bool>,
    taken: Vec<bool>,
    heavy: usize,
    rounds: usize,
    claims: Vec<usize>,
    synced: usize,
    maker_first: Option<bool>,
    done: bool,
    violations: Vec<String>,
    ledger_checks: usize,
    reductions: usize,
    substitutions: usize,
}

impl SmStrategy {
    /// `tree` must be a simple (N,L)-tree on the board with `k = b + 2`.
    pub fn new(tree: NLTree, b: usize) -> Result<Self, GameError> {
        if tree.k != b + 2 {
            return Err(GameError::Domain(format!("tree built for k = {} but bias is {b}", tree.k)));
        }
        if !tree.simple {
            return Err(GameError::Domain("phase 1 needs a simple tree".into()));
        }
        let edge_child = tree
            .parent_edge
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|e| (e, i)))
            .collect();
        let n = tree.len();
        let mut in_t = vec![false; n];
        in_t[0] = true;
        Ok(Self {
            tree,
            b,
            edge_child,
            in_t,
            taken: vec![false; n],
            heavy: 0,
            rounds: 0,
            claims: Vec::new(),
            synced: 0,
            maker_first: None,
            done: false,
            violations: Vec::new(),
            ledger_checks: 0,
            reductions: 0,
            substitutions: 0,
        })
    }

    pub fn tree(&self) -> &NLTree {
        &self.tree
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Board vertices of Maker's tree.
    pub fn tree_host_vertices(&self) -> Vec<usize> {
        (0..self.tree.len()).filter(|&i| self.in_t[i]).map(|i| self.tree.vertices[i]).collect()
    }

    pub fn snapshot(&self) -> SaplingState {
        let free = self.free_boundary();
        SaplingState {
            tree_vertices: (0..self.tree.len()).filter(|&i| self.in_t[i]).collect(),
            heavy_count: self.heavy,
            free_count: free.len(),
            frontier_level: free
                .iter()
                .map(|&c| self.tree.level[c])
                .filter(|&l| l < self.tree.height)
                .min(),
            rounds: self.rounds,
        }
    }

    fn parent(&self, c: usize) -> usize {
        self.tree.parent[c].expect("non-root")
    }

    fn edge_of(&self, c: usize) -> usize {
        self.tree.parent_edge[c].expect("non-root")
    }

    fn on_boundary(&self, c: usize) -> bool {
        c != 0 && !self.in_t[c] && self.in_t[self.parent(c)]
    }

    /// Children on the far side of free boundary edges, by edge id.
    fn free_boundary(&self) -> Vec<usize> {
        let mut out: Vec<usize> = (1..self.tree.len())
            .filter(|&c| self.on_boundary(c) && !self.taken[c])
            .collect();
        out.sort_by_key(|&c| self.edge_of(c));
        out
    }

    fn breaker_claim(&mut self, e: usize) {
        let direct = self.edge_child.get(&e).copied().and_then(|c| {
            if self.in_t[c] {
                return None;
            }
            let mut a = c;
            while !self.in_t[self.parent(a)] {
                a = self.parent(a);
            }
            (!self.taken[a]).then_some(a)
        });
        let target = match direct {
            Some(a) => {
                if self.tree.parent_edge[a] != Some(e) {
                    self.reductions += 1;
                }
                Some(a)
            }
            None => {
                self.substitutions += 1;
                self.free_boundary().first().copied()
            }
        };
        if let Some(a) = target {
            self.taken[a] = true;
        }
    }

    fn sync(&mut self, state: &GameState<'_>) {
        if self.maker_first.is_none() {
            self.maker_first = Some(state.first() == Player::Maker);
        }
        let moves = state.moves();
        for i in self.synced..moves.len() {
            if self.done {
                break;
            }
            let mv = &moves[i];
            for &e in &mv.edges {
                match mv.player {
                    Player::Breaker => self.breaker_claim(e),
                    Player::Maker => match self.edge_child.get(&e).copied() {
                        Some(c) if self.on_boundary(c) && !self.taken[c] => {
                            self.in_t[c] = true;
                            self.claims.push(e);
                            self.rounds += 1;
                            if self.tree.is_heavy(c) {
                                self.heavy += 1;
                            }
                        }
                        _ => self.violations.push(format!("move {i}: Maker edge {e} is not a free boundary edge")),
                    },
                }
            }
        }
        self.synced = moves.len();
    }

    /// Phase-1 move, or `None` once only leaf-level boundary edges are free.
    pub fn select(&mut self, state: &GameState<'_>) -> Option<usize> {
        self.sync(state);
        if self.done {
            return None;
        }
        let free = self.free_boundary();
        let offset = if self.maker_first == Some(true) { self.b } else { 0 };
        let expected = self.heavy + 1 + offset;
        self.ledger_checks += 1;
        if free.len() != expected {
            self.violations.push(format!(
                "round {}: {} free boundary edges, expected {} heavy + 1{}",
                self.rounds,
                free.len(),
                self.heavy,
                if offset > 0 { " + b" } else { "" }
            ));
        }
        let pick = free
            .iter()
            .copied()
            .filter(|&c| self.tree.level[c] < self.tree.height)
            .min_by_key(|&c| (self.tree.level[c], self.edge_of(c)));
        match pick {
            Some(c) if state.is_free(self.edge_of(c)) => Some(self.edge_of(c)),
            Some(c) => {
                self.violations.push(format!(
                    "round {}: boundary edge {} is free in the restricted game but claimed on the board",
                    self.rounds,
                    self.edge_of(c)
                ));
                self.finish();
                None
            }
            None => {
                self.finish();
                None
            }
        }
    }

    fn finish(&mut self) {
        self.done = true;
        let bound = heavy_lower_bound(self.tree.k, self.tree.height, self.tree.l);
        if (self.heavy as u64) < bound {
            self.violations.push(format!("{} heavy vertices in T, fewer than the bound {bound}", self.heavy));
        }
        let top = (0..self.tree.len()).filter(|&i| self.in_t[i]).map(|i| self.tree.level[i]).max();
        let want = self.tree.height.saturating_sub(1);
        if self.violations.is_empty() && top != Some(want) {
            self.violations.push(format!("phase 1 ended with T reaching level {top:?}, not {want}"));
        }
        // Maker's phase-1 edges must form one tree through the root
        let hosts = self.tree_host_vertices();
        let index: HashMap<usize, usize> = hosts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = DisjointSets::new(hosts.len());
        let mut ok = self.claims.len() + 1 == hosts.len();
        for &e in &self.claims {
            let c = self.edge_child[&e];
            let (a, b) = (self.tree.vertices[self.parent(c)], self.tree.vertices[c]);
            match (index.get(&a), index.get(&b)) {
                (Some(&x), Some(&y)) => ok &= dsu.union(x, y).is_some(),
                _ => ok = false,
            }
        }
        if !ok || dsu.set_count() != 1 {
            self.violations.push("Maker's phase-1 edges are not a single tree through the root".into());
        }
    }
}

impl Strategy for SmStrategy {
    fn name(&self) -> String {
        "sapling".into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        match self.select(state) {
            Some(e) if count == 1 => Ok(vec![e]),
            _ => Ok(lowest_free_edges(state, count, &[])),
        }
    }

    fn observe(&mut self, state: &GameState<'_>) {
        self.sync(state);
    }

    fn violations(&self) -> Vec<String> {
        self.violations.clone()
    }

    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("sm_rounds".into(), self.rounds.to_string()),
            ("sm_heavy".into(), self.heavy.to_string()),
            ("sm_ledger_checks".into(), self.ledger_checks.to_string()),
            ("sm_reductions".into(), self.reductions.to_string()),
            ("sm_substitutions".into(), self.substitutions.to_string()),
            (
                "sm_heavy_bound".into(),
                heavy_lower_bound(self.tree.k, self.tree.height, self.tree.l).to_string(),
            ),
        ]
    }
}

pub fn sm_strategy(tree: NLTree) -> Result<SmStrategy, GameError> {
    let b = tree.k.checked_sub(2).filter(|&b| b >= 1).ok_or_else(|| {
        GameError::Domain(format!("k = {} gives no positive bias", tree.k))
    })?;
    SmStrategy::new(tree, b)
}
