use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::engine::{lowest_free_edges, GameState, Player, Strategy};
use crate::error::GameError;
use crate::graphs::Graph;
use crate::peeling::k_core;

/// Grows one tree `T` by claiming the lowest-id free edge of `∂T` that
/// stays inside `allowed`; once there is none, passes by claiming the
/// global lowest-id free edge.
#[derive(Debug, Clone)]
pub struct NaiveStrategy {
    allowed: Vec<bool>,
    in_t: Vec<bool>,
    tree: Vec<usize>,
    heap: BinaryHeap<Reverse<usize>>,
    synced: Option<usize>,
    passes: usize,
    exhausted_at: Option<usize>,
}

impl NaiveStrategy {
    pub fn new(board: &Graph, allowed: Vec<bool>, start: usize) -> Self {
        Self::with_tree(board, allowed, &[start])
    }

    /// Continues from an existing tree; moves already made are not replayed.
    pub fn with_tree(board: &Graph, allowed: Vec<bool>, vertices: &[usize]) -> Self {
        let mut s = Self {
            allowed,
            in_t: vec![false; board.n()],
            tree: Vec::new(),
            heap: BinaryHeap::new(),
            synced: None,
            passes: 0,
            exhausted_at: None,
        };
        for &v in vertices {
            s.add(board, v);
        }
        s
    }

    pub fn tree_vertices(&self) -> &[usize] {
        &self.tree
    }

    pub fn passes(&self) -> usize {
        self.passes
    }

    /// Index of the move at which `∂T` was first found without free edges.
    pub fn exhausted_at(&self) -> Option<usize> {
        self.exhausted_at
    }

    fn add(&mut self, board: &Graph, v: usize) {
        if self.in_t[v] {
            return;
        }
        self.in_t[v] = true;
        self.tree.push(v);
        for &e in board.incident(v) {
            let w = board.other(e, v);
            if self.allowed[w] && !self.in_t[w] {
                self.heap.push(Reverse(e));
            }
        }
    }

    fn crossing(&self, board: &Graph, e: usize) -> Option<usize> {
        let (u, v) = board.edge(e);
        match (self.in_t[u], self.in_t[v]) {
            (true, false) if self.allowed[v] => Some(v),
            (false, true) if self.allowed[u] => Some(u),
            _ => None,
        }
    }

    fn sync(&mut self, state: &GameState<'_>) {
        let moves = state.moves();
        let start = *self.synced.get_or_insert(moves.len());
        for mv in &moves[start..] {
            if mv.player == Player::Maker {
                for &e in &mv.edges {
                    if let Some(w) = self.crossing(state.board(), e) {
                        self.add(state.board(), w);
                    }
                }
            }
        }
        self.synced = Some(moves.len());
    }

    /// Lowest-id free edge of `∂T`, or `None` if the boundary is exhausted.
    pub fn boundary_move(&mut self, state: &GameState<'_>) -> Option<usize> {
        self.sync(state);
        while let Some(&Reverse(e)) = self.heap.peek() {
            if state.is_free(e) && self.crossing(state.board(), e).is_some() {
                return Some(e);
            }
            self.heap.pop();
        }
        if self.exhausted_at.is_none() {
            self.exhausted_at = Some(state.moves().len());
        }
        None
    }
}

impl Strategy for NaiveStrategy {
    fn name(&self) -> String {
        "naive".into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        match self.boundary_move(state) {
            Some(e) if count == 1 => Ok(vec![e]),
            _ => {
                self.passes += 1;
                Ok(lowest_free_edges(state, count, &[]))
            }
        }
    }

    fn observe(&mut self, state: &GameState<'_>) {
        self.sync(state);
    }

    fn notes(&self) -> Vec<(String, String)> {
        vec![
            ("naive_tree_vertices".into(), self.tree.len().to_string()),
            ("naive_passes".into(), self.passes.to_string()),
        ]
    }
}

/// Naive Maker on the `(b+2)`-core from its highest-degree vertex (lowest id
/// on ties); on the whole board when that core is empty.
pub fn naive_strategy(board: &Graph, b: usize) -> NaiveStrategy {
    let core = k_core(board, b + 2);
    let (allowed, pool): (Vec<bool>, Vec<usize>) = if core.nhat > 0 {
        let mut allowed = vec![false; board.n()];
        for &v in &core.vertex_map {
            allowed[v] = true;
        }
        (allowed, core.vertex_map.clone())
    } else {
        (vec![true; board.n()], (0..board.n()).collect())
    };
    let start = max_degree_vertex(board, &pool).unwrap_or(0);
    NaiveStrategy::new(board, allowed, start)
}

pub(crate) fn max_degree_vertex(board: &Graph, pool: &[usize]) -> Option<usize> {
    pool.iter().copied().max_by_key(|&v| (board.degree(v), Reverse(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{play, LowestFirst};

    #[test]
    fn k4_reaches_three_vertices() {
        let g = Graph::complete(4);
        let mut maker = NaiveStrategy::new(&g, vec![true; 4], 0);
        let r = play(&g, 1, &mut maker, &mut LowestFirst, Player::Maker).unwrap();
        assert!(r.largest_maker_component >= 3);
    }

    #[test]
    fn stays_inside_allowed_set() {
        // path 0-1-2-3 with 3 outside
        let g = Graph::path(4);
        let mut maker = NaiveStrategy::new(&g, vec![true, true, true, false], 0);
        let _ = play(&g, 1, &mut maker, &mut LowestFirst, Player::Maker).unwrap();
        assert!(!maker.tree_vertices().contains(&3));
    }
}
