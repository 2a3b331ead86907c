use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::online::{OptimisticOgd, StepSchedule, DEFAULT_ADAGRAD_FLOOR};
use crate::problems::OnlineSequence;

#[derive(Clone, Debug)]
pub struct OnlineRunOptions {
    /// Starting point `x_hat_1`; the domain center when absent.
    pub x1: Option<RealVector>,
    pub adagrad_floor: f64,
    /// Keep every `stride`-th round (plus the first and last).
    pub stride: usize,
}

impl Default for OnlineRunOptions {
    fn default() -> Self {
        OnlineRunOptions { x1: None, adagrad_floor: DEFAULT_ADAGRAD_FLOOR, stride: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OnlineRound {
    pub t: usize,
    /// Played point `x_t`.
    pub x: RealVector,
    /// Intermediate iterate `x_hat_t` the play was derived from.
    pub x_hat: RealVector,
    pub gradient: RealVector,
    pub optimism: RealVector,
    pub eta: f64,
    /// `||grad_t - M_t||^2`.
    pub deviation_sq: f64,
    /// AdaGrad accumulator `A_t` after this round.
    pub accumulator: Option<f64>,
    pub loss: f64,
    pub cumulative_loss: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OnlineTrace {
    pub rounds: Vec<OnlineRound>,
    pub total_rounds: usize,
    /// One gradient query per round.
    pub queries: usize,
    pub total_loss: f64,
    pub adagrad_floor: Option<f64>,
    /// `sum_t a_t / sqrt(floor + sum_{s<=t} a_s)` with `a_t = ||grad_t - M_t||^2`.
    pub self_confident_sum: f64,
    pub total_deviation: f64,
    /// Largest distance of any `x_t` or `x_hat_t` to the domain.
    pub max_infeasibility: f64,
    pub final_x_hat: RealVector,
}

impl OnlineTrace {
    /// Upper side of the self-confident tuning inequality, `2 sqrt(floor + sum_t a_t)`.
    pub fn self_confident_bound(&self) -> Option<f64> {
        self.adagrad_floor.map(|floor| 2.0 * (floor + self.total_deviation).sqrt())
    }
}

fn run_optimistic(
    seq: &OnlineSequence,
    domain: &Domain,
    horizon: usize,
    schedule: StepSchedule,
    opts: &OnlineRunOptions,
) -> Result<OnlineTrace> {
    if horizon == 0 {
        return Err(Error::InvalidParameter("horizon must be positive".into()));
    }
    if seq.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: seq.dim() });
    }
    let stride = opts.stride.max(1);
    let floor = schedule.floor();
    let x1 = opts.x1.clone().unwrap_or_else(|| domain.center());
    let mut learner = OptimisticOgd::new(domain.clone(), x1, schedule)?;
    let mut last_grad: Option<RealVector> = None;
    let mut rounds = Vec::with_capacity(horizon / stride + 2);
    let (mut total_loss, mut sc_sum, mut total_dev, mut max_infeasibility) = (0.0, 0.0, 0.0, 0.0f64);

    for t in 1..=horizon {
        let optimism = last_grad.take().unwrap_or_else(|| RealVector::zeros(domain.dim()));
        let x_hat = learner.x_hat().clone();
        let x = learner.predict(optimism.clone())?.clone();
        let f = seq.at(t);
        let gradient = f.gradient(&x)?;
        let loss = f.value(&x)?;
        learner.update(&gradient)?;

        let deviation_sq = gradient.sub(&optimism)?.norm_sq();
        total_dev += deviation_sq;
        if let Some(floor) = floor {
            let denom = (floor + total_dev).sqrt();
            if denom > 0.0 {
                sc_sum += deviation_sq / denom;
            }
        }
        total_loss += loss;
        max_infeasibility = max_infeasibility.max(domain.distance_to(&x)?).max(domain.distance_to(&x_hat)?);

        if t == 1 || t == horizon || t % stride == 0 {
            rounds.push(OnlineRound {
                t,
                x,
                x_hat,
                gradient: gradient.clone(),
                optimism,
                eta: learner.last_step_size(),
                deviation_sq,
                accumulator: learner.schedule().accumulator(),
                loss,
                cumulative_loss: total_loss,
            });
        }
        last_grad = Some(gradient);
    }
    max_infeasibility = max_infeasibility.max(domain.distance_to(learner.x_hat())?);

    Ok(OnlineTrace {
        rounds,
        total_rounds: horizon,
        queries: horizon,
        total_loss,
        adagrad_floor: floor,
        self_confident_sum: sc_sum,
        total_deviation: total_dev,
        max_infeasibility,
        final_x_hat: learner.x_hat().clone(),
    })
}

/// Optimistic OGD with `M_1 = 0`, `M_t = grad f_{t-1}(x_{t-1})` and AdaGrad
/// steps `eta_t = D / (2 sqrt(floor + A_{t-1}))`. Needs a bounded domain.
pub fn run_online_convex(
    seq: &OnlineSequence,
    domain: &Domain,
    horizon: usize,
    opts: &OnlineRunOptions,
) -> Result<OnlineTrace> {
    let schedule = StepSchedule::adagrad(domain.diameter(), opts.adagrad_floor)?;
    run_optimistic(seq, domain, horizon, schedule, opts)
}

/// Optimistic OGD with last-gradient optimism and `eta_t = 6 / (lambda t)`.
pub fn run_online_strongly_convex(
    seq: &OnlineSequence,
    domain: &Domain,
    lambda: f64,
    horizon: usize,
    opts: &OnlineRunOptions,
) -> Result<OnlineTrace> {
    let schedule = StepSchedule::strongly_convex(lambda)?;
    run_optimistic(seq, domain, horizon, schedule, opts)
}
