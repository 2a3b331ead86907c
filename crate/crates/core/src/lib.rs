//! Universal first-order methods built from optimistic online learning.
//!
//! The crate has four layers:
//!
//! - [`math`]: vectors, feasible domains, Bregman divergences.
//! - [`problems`]: the objective zoo, gradient oracles with query budgets,
//!   online loss sequences and smoothness checkers.
//! - [`online`], [`conversion`], [`strongly_convex`]: the algorithms.
//! - [`metrics`], [`experiment`]: regret, rate fitting, configuration files,
//!   traces and the packaged suites.

pub mod conversion;
pub mod error;
pub mod experiment;
pub mod math;
pub mod metrics;
pub mod online;
pub mod problems;
pub mod strongly_convex;

pub use error::{Error, Result};
pub use math::{Domain, RealVector};
