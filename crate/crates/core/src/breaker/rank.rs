use crate::graphs::Graph;
use crate::peeling::{peel, PeelTrace, Rank};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    Horizontal,
    /// `lower` is the endpoint of lesser rank.
    Vertical { lower: usize },
}

/// Ranks from `(b+2)`-peeling of the board and the induced edge classes.
#[derive(Debug, Clone)]
pub struct RankTable {
    pub b: usize,
    pub ranks: Vec<Rank>,
    pub classes: Vec<EdgeClass>,
    pub trace: PeelTrace,
}

impl RankTable {
    pub fn rank(&self, v: usize) -> Rank {
        self.ranks[v]
    }

    pub fn class(&self, e: usize) -> EdgeClass {
        self.classes[e]
    }

    pub fn all_finite(&self) -> bool {
        self.ranks.iter().all(|r| r.is_finite())
    }

    /// Whether edge `e` is incident with `v` in `G_t` for `t = rank(v)`,
    /// i.e. whether it can belong to `F` of the H-comp of `v`.
    pub fn in_level_graph_of(&self, e: usize, v: usize) -> bool {
        match self.classes[e] {
            EdgeClass::Horizontal => true,
            EdgeClass::Vertical { lower } => lower == v,
        }
    }
}

pub fn build_rank_table(board: &Graph, b: usize) -> RankTable {
    let trace = peel(board, b + 2, None);
    let ranks = trace.ranks.clone();
    let classes = board
        .edges()
        .iter()
        .map(|&(u, v)| {
            if ranks[u] == ranks[v] {
                EdgeClass::Horizontal
            } else if ranks[u] < ranks[v] {
                EdgeClass::Vertical { lower: u }
            } else {
                EdgeClass::Vertical { lower: v }
            }
        })
        .collect();
    RankTable { b, ranks, classes, trace }
}
