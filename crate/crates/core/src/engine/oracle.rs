//! Exact game values on tiny boards by memoized minimax.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::play::Strategy;
use super::state::{GameState, Owner, Player};
use crate::error::GameError;
use crate::graphs::Graph;

pub const ORACLE_EDGE_LIMIT: usize = 12;

type Key = (u16, u16, Player, u8);

/// Memoized minimax over `(maker set, breaker set, player to move, claims
/// left in the current move)`. Breaker's `b` claims are searched one at a
/// time, which gives the same value as choosing the whole set at once.
#[derive(Debug, Clone)]
pub struct MinimaxOracle {
    n: usize,
    edges: Vec<(usize, usize)>,
    b: usize,
    memo: HashMap<Key, u8>,
}

impl MinimaxOracle {
    pub fn new(board: &Graph, b: usize) -> Result<Self, GameError> {
        if board.m() > ORACLE_EDGE_LIMIT {
            return Err(GameError::BoardTooLarge { edges: board.m(), limit: ORACLE_EDGE_LIMIT });
        }
        if b == 0 {
            return Err(GameError::Domain("bias must be at least 1".into()));
        }
        Ok(Self { n: board.n(), edges: board.edges().to_vec(), b, memo: HashMap::new() })
    }

    fn full(&self) -> u16 {
        ((1u32 << self.edges.len()) - 1) as u16
    }

    fn largest(&self, mask: u16) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut touched = vec![false; self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
                touched[u] = true;
                touched[v] = true;
            }
        }
        let mut size = vec![0usize; self.n];
        for v in 0..self.n {
            if touched[v] {
                let r = find(&mut parent, v);
                size[r] += 1;
            }
        }
        size.into_iter().max().unwrap_or(0)
    }

    /// Value with `player` to move and `left` claims remaining in their move.
    /// `left = 0` means a fresh move.
    pub fn value(&mut self, maker: u16, breaker: u16, player: Player, left: u8) -> usize {
        let free = self.full() & !(maker | breaker);
        if free == 0 {
            return self.largest(maker);
        }
        let left = if left == 0 {
            match player {
                Player::Maker => 1,
                Player::Breaker => (free.count_ones() as usize).min(self.b) as u8,
            }
        } else {
            left
        };
        let key = (maker, breaker, player, left);
        if let Some(&v) = self.memo.get(&key) {
            return v as usize;
        }
        let mut best: Option<usize> = None;
        for e in 0..self.edges.len() {
            let bit = 1u16 << e;
            if free & bit == 0 {
                continue;
            }
            let (next_player, next_left) = if left == 1 { (player.other(), 0) } else { (player, left - 1) };
            let v = match player {
                Player::Maker => self.value(maker | bit, breaker, next_player, next_left),
                Player::Breaker => self.value(maker, breaker | bit, next_player, next_left),
            };
            best = Some(match (best, player) {
                (None, _) => v,
                (Some(x), Player::Maker) => x.max(v),
                (Some(x), Player::Breaker) => x.min(v),
            });
        }
        let v = best.expect("a free edge exists");
        self.memo.insert(key, v as u8);
        v
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Largest Maker component under optimal play by both sides.
pub fn minimax_component_value(board: &Graph, b: usize, first: Player) -> Result<usize, GameError> {
    Ok(MinimaxOracle::new(board, b)?.value(0, 0, first, 0))
}

fn masks(state: &GameState<'_>) -> (u16, u16) {
    let (mut maker, mut breaker) = (0u16, 0u16);
    for (e, &o) in state.owners().iter().enumerate() {
        match o {
            Owner::Maker => maker |= 1 << e,
            Owner::Breaker => breaker |= 1 << e,
            Owner::Free => {}
        }
    }
    (maker, breaker)
}

/// Plays optimally for `side` using the oracle's values, lowest edge id on ties.
#[derive(Debug, Clone)]
pub struct OptimalStrategy {
    side: Player,
    oracle: MinimaxOracle,
}

impl OptimalStrategy {
    pub fn new(board: &Graph, b: usize, side: Player) -> Result<Self, GameError> {
        Ok(Self { side, oracle: MinimaxOracle::new(board, b)? })
    }
}

impl Strategy for OptimalStrategy {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        let (mut maker, mut breaker) = masks(state);
        let mut picks = Vec::with_capacity(count);
        for step in 0..count {
            let left = (count - step) as u8;
            let mut best: Option<(usize, usize)> = None;
            for e in 0..state.board().m() {
                let bit = 1u16 << e;
                if (maker | breaker) & bit != 0 {
                    continue;
                }
                let (next_player, next_left) = if left == 1 { (self.side.other(), 0) } else { (self.side, left - 1) };
                let v = match self.side {
                    Player::Maker => self.oracle.value(maker | bit, breaker, next_player, next_left),
                    Player::Breaker => self.oracle.value(maker, breaker | bit, next_player, next_left),
                };
                let better = match (best, self.side) {
                    (None, _) => true,
                    (Some((bv, _)), Player::Maker) => v > bv,
                    (Some((bv, _)), Player::Breaker) => v < bv,
                };
                if better {
                    best = Some((v, e));
                }
            }
            let (_, e) = best.ok_or_else(|| GameError::Protocol {
                player: self.side.to_string(),
                reason: "no free edge for optimal move".into(),
            })?;
            match self.side {
                Player::Maker => maker |= 1 << e,
                Player::Breaker => breaker |= 1 << e,
            }
            picks.push(e);
        }
        Ok(picks)
    }
}

/// Uniformly random free edges.
#[derive(Debug, Clone)]
pub struct RandomStrategy {
    rng: ChaCha8Rng,
}

impl RandomStrategy {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

pub fn random_strategy(seed: u64) -> RandomStrategy {
    RandomStrategy::new(seed)
}

impl Strategy for RandomStrategy {
    fn name(&self) -> String {
        "random".into()
    }

    fn next_moves(&mut self, state: &GameState<'_>, count: usize) -> Result<Vec<usize>, GameError> {
        Ok(state.free_edges().choose_multiple(&mut self.rng, count).copied().collect())
    }
}
