use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::rank::{EdgeClass, RankTable};
use crate::dsu::DisjointSets;
use crate::engine::{GameState, Owner, Player};
use crate::graphs::Graph;
use crate::peeling::Rank;

/// Counters of one H-comp, as maintained incrementally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HCompSummary {
    pub root: usize,
    pub rank: Rank,
    pub size: usize,
    pub above: usize,
    pub free_vertical: usize,
    pub free_horizontal: usize,
}

impl HCompSummary {
    pub fn free_total(&self) -> usize {
        self.free_vertical + self.free_horizontal
    }
}

/// Union-find over Maker's horizontal edges with the free-edge sets
/// `F_V(C)`, `F_H(C)` of every H-comp kept up to date claim by claim.
///
/// `F_V` and `F_H` are min-heaps with lazy deletion; a horizontal edge
/// between two vertices of one component may appear twice.
#[derive(Debug, Clone)]
pub struct HCompTracker {
    edges: Vec<(usize, usize)>,
    classes: Vec<EdgeClass>,
    ranks: Vec<Rank>,
    owner: Vec<Owner>,
    dsu: DisjointSets,
    members: Vec<Vec<usize>>,
    fv_heap: Vec<BinaryHeap<Reverse<usize>>>,
    fh_heap: Vec<BinaryHeap<Reverse<usize>>>,
    fv: Vec<usize>,
    fh_half: Vec<usize>,
    fh_internal: Vec<usize>,
    above: Vec<usize>,
    incident: Vec<Vec<usize>>,
    synced_moves: usize,
}

impl HCompTracker {
    pub fn new(board: &Graph, table: &RankTable) -> Self {
        let n = board.n();
        let mut t = Self {
            edges: board.edges().to_vec(),
            classes: table.classes.clone(),
            ranks: table.ranks.clone(),
            owner: vec![Owner::Free; board.m()],
            dsu: DisjointSets::new(n),
            members: (0..n).map(|v| vec![v]).collect(),
            fv_heap: vec![BinaryHeap::new(); n],
            fh_heap: vec![BinaryHeap::new(); n],
            fv: vec![0; n],
            fh_half: vec![0; n],
            fh_internal: vec![0; n],
            above: vec![0; n],
            incident: (0..n).map(|v| board.incident(v).to_vec()).collect(),
            synced_moves: 0,
        };
        for (e, &(u, v)) in board.edges().iter().enumerate() {
            match t.classes[e] {
                EdgeClass::Horizontal => {
                    t.fh_half[u] += 1;
                    t.fh_half[v] += 1;
                    t.fh_heap[u].push(Reverse(e));
                    if u == v {
                        t.fh_internal[u] += 1;
                    } else {
                        t.fh_heap[v].push(Reverse(e));
                    }
                }
                EdgeClass::Vertical { lower } => {
                    t.fv[lower] += 1;
                    t.fv_heap[lower].push(Reverse(e));
                }
            }
        }
        t
    }

    pub fn root(&mut self, v: usize) -> usize {
        self.dsu.find(v)
    }

    pub fn owner(&self, e: usize) -> Owner {
        self.owner[e]
    }

    pub fn summary(&mut self, v: usize) -> HCompSummary {
        let r = self.dsu.find(v);
        HCompSummary {
            root: r,
            rank: self.ranks[r],
            size: self.members[r].len(),
            above: self.above[r],
            free_vertical: self.fv[r],
            free_horizontal: self.fh_half[r] - self.fh_internal[r],
        }
    }

    /// Summaries of every H-comp (singletons included).
    pub fn summaries(&mut self) -> Vec<HCompSummary> {
        (0..self.members.len())
            .filter(|&v| self.dsu.find(v) == v)
            .collect::<Vec<_>>()
            .into_iter()
            .map(|r| self.summary(r))
            .collect()
    }

    pub fn members(&mut self, v: usize) -> &[usize] {
        let r = self.dsu.find(v);
        &self.members[r]
    }

    /// Applies every move in `state` not yet seen.
    pub fn sync(&mut self, state: &GameState<'_>) {
        let moves = state.moves();
        assert!(moves.len() >= self.synced_moves, "tracker reused across games");
        for mv in &moves[self.synced_moves..] {
            for &e in &mv.edges {
                self.claim(e, mv.player);
            }
        }
        self.synced_moves = moves.len();
    }

    pub fn claim(&mut self, e: usize, player: Player) {
        debug_assert_eq!(self.owner[e], Owner::Free);
        self.owner[e] = player.owner();
        let (x, y) = self.edges[e];
        match self.classes[e] {
            EdgeClass::Horizontal => {
                let (rx, ry) = (self.dsu.find(x), self.dsu.find(y));
                self.fh_half[rx] -= 1;
                self.fh_half[ry] -= 1;
                if rx == ry {
                    self.fh_internal[rx] -= 1;
                } else if player == Player::Maker {
                    self.merge(rx, ry);
                }
            }
            EdgeClass::Vertical { lower } => {
                let r = self.dsu.find(lower);
                self.fv[r] -= 1;
                if player == Player::Maker {
                    self.above[r] += 1;
                }
            }
        }
    }

    fn merge(&mut self, ra: usize, rb: usize) {
        let (small, big) = if self.members[ra].len() < self.members[rb].len() { (ra, rb) } else { (rb, ra) };
        let mut cross = 0;
        for &v in &self.members[small] {
            for &e in &self.incident[v] {
                if self.owner[e] != Owner::Free || self.classes[e] != EdgeClass::Horizontal {
                    continue;
                }
                let (p, q) = self.edges[e];
                let w = if p == v { q } else { p };
                if w != v && self.dsu.find(w) == big {
                    cross += 1;
                }
            }
        }
        let root = self.dsu.union(small, big).expect("distinct components");
        let other = if root == small { big } else { small };
        let moved = std::mem::take(&mut self.members[other]);
        self.members[root].extend(moved);
        let mut h = std::mem::take(&mut self.fv_heap[other]);
        self.fv_heap[root].append(&mut h);
        let mut h = std::mem::take(&mut self.fh_heap[other]);
        self.fh_heap[root].append(&mut h);
        self.fv[root] += self.fv[other];
        self.fh_half[root] += self.fh_half[other];
        self.fh_internal[root] += self.fh_internal[other] + cross;
        self.above[root] += self.above[other];
    }

    /// Lowest-id free edge of `F_V(C)` (`vertical`) or `F_H(C)` for the
    /// component containing `v`, skipping `taken`.
    pub fn lowest_free_in(&mut self, v: usize, vertical: bool, taken: &[usize]) -> Option<usize> {
        let r = self.dsu.find(v);
        let heap = if vertical { &mut self.fv_heap[r] } else { &mut self.fh_heap[r] };
        let mut stash = Vec::new();
        let mut found = None;
        while let Some(&Reverse(e)) = heap.peek() {
            if self.owner[e] != Owner::Free {
                heap.pop();
            } else if taken.contains(&e) {
                stash.push(heap.pop().expect("peeked"));
            } else {
                found = Some(e);
                break;
            }
        }
        heap.extend(stash);
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::breaker::build_rank_table;

    #[test]
    fn counters_on_star() {
        let g = Graph::star(4);
        let table = build_rank_table(&g, 1);
        let mut t = HCompTracker::new(&g, &table);
        let leaf = t.summary(1);
        assert_eq!((leaf.free_vertical, leaf.free_horizontal, leaf.size), (1, 0, 1));
        let center = t.summary(0);
        assert_eq!(center.free_total(), 0);
        t.claim(0, Player::Maker);
        assert_eq!(t.summary(1).above, 1);
        assert_eq!(t.summary(1).free_vertical, 0);
    }

    #[test]
    fn merge_counts_internal_edges() {
        // K_4 plus pendant: all of K_4 has infinite rank for b = 1
        let g = Graph::complete(4);
        let table = build_rank_table(&g, 1);
        let mut t = HCompTracker::new(&g, &table);
        t.claim(0, Player::Maker); // (0,1)
        let s = t.summary(0);
        assert_eq!(s.size, 2);
        // free horizontal edges touching {0, 1}: 02, 12, 03, 13
        assert_eq!(s.free_horizontal, 4);
        t.claim(5, Player::Maker); // (2,3)
        t.claim(1, Player::Maker); // (0,2) merges the pairs
        let s = t.summary(3);
        assert_eq!(s.size, 4);
        // remaining free edges 12, 03, 13 are internal
        assert_eq!(s.free_horizontal, 3);
        assert_eq!(t.lowest_free_in(3, false, &[]), Some(2));
        assert_eq!(t.lowest_free_in(3, false, &[2]), Some(3));
        assert_eq!(t.lowest_free_in(3, true, &[]), None);
    }
}
