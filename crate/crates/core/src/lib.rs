//! Random-graph k-cores and the biased Maker-Breaker component game.

pub mod breaker;
pub mod dsu;
pub mod engine;
pub mod experiments;
pub mod error;
pub mod graphs;
pub mod maker;
pub mod numerics;
pub mod peeling;

pub use error::{GameError, GraphError, NumericsError};
