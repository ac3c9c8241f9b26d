//! Parallel k-peeling, k-cores, the sequential 2-core and local diagnostics.

mod core;
mod diagnostics;
mod peel;

pub use self::core::{boundary, excess, k_core, two_core_sequential, ChainStep, CoreResult, TwoCoreReport};
pub use diagnostics::{
    ball_stats, component_sizes, expansion_ratio, sampled_expansion_check, BallStats, ExpansionSample,
};
pub use peel::{peel, PeelTrace, Rank, RoundStats};
