//! Stabilized online-to-batch conversion and the universal convex optimizer
//! built from it.

mod stabilized;
mod universal;

pub use stabilized::{
    o2b_run, stabilization_residual, weighted_regret, ConversionRound, ConversionRun, WeightedAverage,
};
pub use universal::{baseline_ogd, universal_convex_optimize, UniversalOptions};
