//! The (1:b) Maker-Breaker game on graph boards.

mod oracle;
mod play;
mod state;

pub use oracle::{
    minimax_component_value, random_strategy, MinimaxOracle, OptimalStrategy, RandomStrategy, ORACLE_EDGE_LIMIT,
};
pub(crate) use play::lowest_free_edges;
pub use play::{check_claim_accounting, play, Game, GameResult, LowestFirst, Strategy};
pub use state::{largest_component_of_claims, GameState, Move, Owner, Player};
