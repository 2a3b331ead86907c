//! Optimistic online gradient descent (two-step and one-step forms), step-size
//! schedules, and full-loop drivers for convex and strongly convex sequences.

mod drivers;
mod learner;
mod schedule;

pub use drivers::{run_online_convex, run_online_strongly_convex, OnlineRound, OnlineRunOptions, OnlineTrace};
pub use learner::{one_step_update, OnlineLearner, OptimismRule, OptimisticLearner, OptimisticOgd};
pub use schedule::{StepSchedule, DEFAULT_ADAGRAD_FLOOR, STRONGLY_CONVEX_FACTOR};
