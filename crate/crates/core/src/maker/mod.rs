//! Maker's side: (N,L)-tree finder, the sapling strategy, naive tree growth
//! and the two-phase combination.

mod naive;
mod nltree;
mod sapling;
mod two_phase;

pub use naive::{naive_strategy, NaiveStrategy};
pub use nltree::{
    check_nl_tree, explore_types, find_nl_tree, find_nl_tree_with_restarts, ExplorationTypeMap, ExploredVertex,
    FinderRun, NLTree,
};
pub use sapling::{heavy_lower_bound, sm_strategy, SaplingState, SmStrategy};
pub use two_phase::{tree_params_for, two_phase_strategy, ExcessReport, TwoPhaseConfig, TwoPhaseStrategy};
