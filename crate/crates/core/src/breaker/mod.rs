//! Breaker's rank-based strategy and the H-comp invariant checkers.

mod rank;
mod strategy;
mod tracker;

pub use rank::{build_rank_table, EdgeClass, RankTable};
pub use strategy::{
    check_contraction_tree, check_hcomp_invariants, recount_hcomps, sb_strategy, CheckMode, ContractionReport,
    HCompCheck, SbStrategy,
};
pub use tracker::{HCompSummary, HCompTracker};
