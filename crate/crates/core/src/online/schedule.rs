use serde::Serialize;

use crate::error::{Error, Result};

/// Added under the square root of the AdaGrad step so that the first step,
/// taken before any gradient is seen, is finite.
pub const DEFAULT_ADAGRAD_FLOOR: f64 = 1e-12;

pub const STRONGLY_CONVEX_FACTOR: f64 = 6.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepSchedule {
    /// `eta_t = D / (2 sqrt(floor + A_{t-1}))`, where `A` accumulates
    /// `||grad_t - M_t||^2`.
    AdaGrad { diameter: f64, floor: f64, accumulator: f64 },
    /// `eta_t = factor / (lambda t)`.
    StronglyConvex { lambda: f64, factor: f64 },
    Constant { eta: f64 },
}

impl StepSchedule {
    pub fn adagrad(diameter: f64, floor: f64) -> Result<Self> {
        if diameter.is_infinite() {
            return Err(Error::InfiniteDiameter);
        }
        if !(diameter > 0.0) || !(floor >= 0.0 && floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "adagrad needs diameter > 0 and floor >= 0, got {diameter} and {floor}"
            )));
        }
        Ok(StepSchedule::AdaGrad { diameter, floor, accumulator: 0.0 })
    }

    pub fn strongly_convex(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("strong convexity must be positive, got {lambda}")));
        }
        Ok(StepSchedule::StronglyConvex { lambda, factor: STRONGLY_CONVEX_FACTOR })
    }

    pub fn constant(eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("step size must be positive, got {eta}")));
        }
        Ok(StepSchedule::Constant { eta })
    }

    /// Step size for round `t >= 1`. May be `+inf` for an AdaGrad schedule
    /// with zero floor before anything has been accumulated.
    pub fn step_size(&self, t: usize) -> f64 {
        match *self {
            StepSchedule::AdaGrad { diameter, floor, accumulator } => {
                diameter / (2.0 * (floor + accumulator).sqrt())
            }
            StepSchedule::StronglyConvex { lambda, factor } => factor / (lambda * t as f64),
            StepSchedule::Constant { eta } => eta,
        }
    }

    /// Feeds `||grad_t - M_t||^2` to the schedule.
    pub fn record(&mut self, deviation_sq: f64) {
        if let StepSchedule::AdaGrad { accumulator, .. } = self {
            *accumulator += deviation_sq;
        }
    }

    pub fn accumulator(&self) -> Option<f64> {
        match self {
            StepSchedule::AdaGrad { accumulator, .. } => Some(*accumulator),
            _ => None,
        }
    }

    pub fn floor(&self) -> Option<f64> {
        match self {
            StepSchedule::AdaGrad { floor, .. } => Some(*floor),
            _ => None,
        }
    }
}
