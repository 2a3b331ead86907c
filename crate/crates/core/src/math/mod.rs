//! Dense vectors, feasible sets with exact Euclidean projection, and Bregman
//! divergences.

mod bregman;
mod domain;
mod vector;

pub use bregman::{bregman_divergence, BREGMAN_CLAMP_TOLERANCE};
pub use domain::Domain;
pub use vector::{axpy, inner, norm, RealVector};
