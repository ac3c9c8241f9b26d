//! Random graph models, degree sequences and edge-list IO.

mod degrees;
mod generators;
mod graph;
mod io;

pub use degrees::{
    degree_histogram, lambda_of_sequence, sample_core_like_sequence, DegreeHistogram, DegreeSequence,
};
pub(crate) use generators::rng_from_seed;
pub use generators::{gen_configuration, gen_gnm, gen_gnp, gen_simple_from_sequence, SimpleSample};
pub use graph::{Graph, InducedSubgraph};
pub use io::{read_graph, write_graph};
