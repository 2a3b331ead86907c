//! Objective functions with certified curvature metadata, gradient oracles
//! with budget accounting, and online function sequences.

mod objective;
mod oracle;
mod sequence;
mod verify;
mod zoo;

pub use objective::{Curvature, Objective, Structure};
pub use oracle::{GradientOracle, OracleMode};
pub use sequence::{make_online_sequence, OnlineSequence, SequenceFamily, SequenceKind, SequenceParams};
pub use verify::{verify_holder, verify_inexact_smoothness, HolderReport, InexactSmoothnessReport};
pub use zoo::{make_holder_power, make_linear, make_nonsmooth, make_quadratic, HolderPower, Linear, Nonsmooth, Quadratic};
