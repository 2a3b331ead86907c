//! Guess-and-check accelerated strongly convex optimization and the grid
//! search over an unknown strong-convexity modulus.

mod grid;
mod guess_check;
mod smoothness;

pub use grid::{grid_count, grid_search_run, GridInstance, GridSearchRun, MAX_PROBE_RESCALES};
pub use guess_check::{
    guess_check_run, run_cor1_known_L, run_cor1_unknown_L, run_thm4, thm4_threshold, GuessCheckRun, GuessCheckStep,
    ACCEPT_RELATIVE_SLACK,
};
pub use smoothness::{empirical_smoothness, empirical_smoothness_with, EmpiricalSmoothness, DEGENERATE_DIVERGENCE};
