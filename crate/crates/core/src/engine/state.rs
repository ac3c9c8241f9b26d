use std::fmt;

use crate::dsu::DisjointSets;
use crate::graphs::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Free,
    Maker,
    Breaker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Maker,
    Breaker,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::Maker => Player::Breaker,
            Player::Breaker => Player::Maker,
        }
    }

    pub fn owner(self) -> Owner {
        match self {
            Player::Maker => Owner::Maker,
            Player::Breaker => Owner::Breaker,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Maker => "maker",
            Player::Breaker => "breaker",
        })
    }
}

/// One player's move: the edges claimed in a single turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub player: Player,
    pub edges: Vec<usize>,
}

/// Ownership of every board edge plus the move log.
#[derive(Debug, Clone)]
pub struct GameState<'a> {
    board: &'a Graph,
    b: usize,
    owner: Vec<Owner>,
    turn: Player,
    first: Player,
    moves: Vec<Move>,
    free: Vec<usize>,
    free_pos: Vec<usize>,
    lowest_free: usize,
    claimed_by: [usize; 2],
}

impl<'a> GameState<'a> {
    pub fn new(board: &'a Graph, b: usize, first: Player) -> Self {
        let m = board.m();
        Self {
            board,
            b,
            owner: vec![Owner::Free; m],
            turn: first,
            first,
            moves: Vec::new(),
            free: (0..m).collect(),
            free_pos: (0..m).collect(),
            lowest_free: 0,
            claimed_by: [0, 0],
        }
    }

    pub fn board(&self) -> &'a Graph {
        self.board
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn turn(&self) -> Player {
        self.turn
    }

    pub fn first(&self) -> Player {
        self.first
    }

    pub fn owner(&self, e: usize) -> Owner {
        self.owner[e]
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owner
    }

    pub fn is_free(&self, e: usize) -> bool {
        self.owner[e] == Owner::Free
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    /// Free edge ids in no particular (but deterministic) order.
    pub fn free_edges(&self) -> &[usize] {
        &self.free
    }

    pub fn lowest_free(&self) -> Option<usize> {
        (self.lowest_free < self.owner.len()).then_some(self.lowest_free)
    }

    pub fn claimed_count(&self, player: Player) -> usize {
        self.claimed_by[player as usize]
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Most recent move by `player`.
    pub fn last_move_of(&self, player: Player) -> Option<&Move> {
        self.moves.iter().rev().find(|mv| mv.player == player)
    }

    /// Flattened `(player, edge)` log in claim order.
    pub fn history(&self) -> impl Iterator<Item = (Player, usize)> + '_ {
        self.moves
            .iter()
            .flat_map(|mv| mv.edges.iter().map(move |&e| (mv.player, e)))
    }

    /// Number of edges the player to move must claim now.
    pub fn required_count(&self) -> usize {
        match self.turn {
            Player::Maker => self.free.len().min(1),
            Player::Breaker => self.free.len().min(self.b),
        }
    }

    pub(crate) fn apply(&mut self, player: Player, edges: Vec<usize>) {
        for &e in &edges {
            debug_assert_eq!(self.owner[e], Owner::Free);
            self.owner[e] = player.owner();
            let i = self.free_pos[e];
            let last = *self.free.last().expect("free edge present");
            self.free.swap_remove(i);
            if last != e {
                self.free_pos[last] = i;
            }
        }
        self.claimed_by[player as usize] += edges.len();
        while self.lowest_free < self.owner.len() && self.owner[self.lowest_free] != Owner::Free {
            self.lowest_free += 1;
        }
        self.moves.push(Move { player, edges });
        self.turn = player.other();
    }

    /// Component sizes (in vertices) of the graph formed by `player`'s edges,
    /// largest first. Untouched vertices are not counted.
    pub fn component_sizes_of(&self, player: Player) -> Vec<usize> {
        claimed_component_sizes(self.board, &self.owner, player.owner())
    }
}

pub(crate) fn claimed_component_sizes(board: &Graph, owner: &[Owner], who: Owner) -> Vec<usize> {
    let mut dsu = DisjointSets::new(board.n());
    let mut touched = vec![false; board.n()];
    for (e, &(u, v)) in board.edges().iter().enumerate() {
        if owner[e] == who {
            dsu.union(u, v);
            touched[u] = true;
            touched[v] = true;
        }
    }
    let mut sizes = vec![0usize; board.n()];
    for v in 0..board.n() {
        if touched[v] {
            sizes[dsu.find(v)] += 1;
        }
    }
    let mut out: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Largest component of `player`'s claimed edges, 0 if none.
pub fn largest_component_of_claims(state: &GameState<'_>, player: Player) -> usize {
    state.component_sizes_of(player).first().copied().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_list_and_cursor() {
        let g = Graph::cycle(5);
        let mut s = GameState::new(&g, 1, Player::Maker);
        assert_eq!(s.lowest_free(), Some(0));
        s.apply(Player::Maker, vec![0]);
        s.apply(Player::Breaker, vec![2]);
        assert_eq!(s.lowest_free(), Some(1));
        assert_eq!(s.free_count(), 3);
        let mut free = s.free_edges().to_vec();
        free.sort_unstable();
        assert_eq!(free, vec![1, 3, 4]);
        assert_eq!(s.turn(), Player::Maker);
        assert_eq!(s.claimed_count(Player::Breaker), 1);
    }

    #[test]
    fn claimed_components() {
        let g = Graph::cycle(5);
        let mut s = GameState::new(&g, 1, Player::Maker);
        assert_eq!(largest_component_of_claims(&s, Player::Maker), 0);
        s.apply(Player::Maker, vec![0, 1, 2, 3, 4]);
        assert_eq!(largest_component_of_claims(&s, Player::Maker), 5);
    }
}
