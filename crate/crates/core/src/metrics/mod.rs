//! Regret, gradient variation, suboptimality traces and rate fits.

mod fit;
mod regret;
mod trace;
mod variation;

pub use fit::{fit_line, geometric_rate, loglog_fit, loglog_slope, GeometricRate, LinearFit, BURN_IN_FRACTION};
pub use regret::{
    best_comparator, minimize_diagonal_quadratic, minimize_linear, partial_regret, regret, Comparator, RegretReport,
};
pub use trace::{RunTrace, TraceRecord};
pub use variation::{
    ghat_max, gradient_variation, gradient_variation_monte_carlo, Variation, MONTE_CARLO_SAMPLES,
};
