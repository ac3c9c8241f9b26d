//! Poisson tails, the branching-process recursion, thresholds and derived constants.

mod branching;
mod constants;
mod poisson;

pub use branching::{
    beta_limit, beta_sequence, f_ratio, find_t_dagger, h, molloy_reed_q, poisson_convolution_check,
    predicted_histogram, solve_ck, solve_mu_c, solve_mu_ck, BranchingProfile, HistogramPrediction,
};
pub use constants::{
    core_constants, default_height, min_mass_bound_holds, tree_constant, CoreConstants, TreeParams,
};
pub use poisson::{
    falling_factorial, psi, psi_ge, psi_lt, truncated_poisson_mean, truncated_poisson_pmf,
    truncated_poisson_solve_lambda, PoissonTail, TruncatedPoisson,
};
