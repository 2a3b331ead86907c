use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::problems::{GradientOracle, Objective};
use crate::strongly_convex::smoothness::{empirical_smoothness_with, EmpiricalSmoothness};

/// Relative slack in the check `4 beta^2 L <= lambda`.
pub const ACCEPT_RELATIVE_SLACK: f64 = 1e-9;

/// Weights are rescaled by a power of two once their sum passes this.
const WEIGHT_RESCALE_ABOVE: f64 = 1e150; // ~2^498
const WEIGHT_RESCALE_EXP: i32 = 498;

/// One inner-loop pass, i.e. one gradient query.
#[derive(Clone, Debug, Serialize)]
pub struct GuessCheckStep {
    /// Query count `c` after this pass.
    pub queries: usize,
    /// Index of the candidate iterate, `t + 1`.
    pub t: usize,
    pub beta: f64,
    /// `log2(alpha_{1:t+1})` for the candidate, independent of rescaling.
    pub log2_weight_sum: f64,
    /// Step size `eta_t`, reported for unscaled weights.
    pub eta: f64,
    /// `None` when the threshold short-circuit skipped the check.
    pub smoothness: Option<EmpiricalSmoothness>,
    pub accepted: bool,
    /// `l(x_bar)` of the candidate.
    pub candidate_value: f64,
    /// `l(x_bar_tau)` of the last accepted iterate after this pass.
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GuessCheckRun {
    pub x_bar: RealVector,
    pub value: f64,
    pub initial_value: f64,
    pub lambda: f64,
    pub beta1: f64,
    pub beta_bar: f64,
    /// Final accepted index `tau`.
    pub tau: usize,
    pub queries: usize,
    pub budget: usize,
    pub rejections: usize,
    /// Set when rejections outnumber accepted steps or beta underflows.
    pub nonconvergence: bool,
    /// Accepted betas `beta_2, ..., beta_tau`.
    pub betas: Vec<f64>,
    pub steps: Vec<GuessCheckStep>,
}

impl GuessCheckRun {
    pub fn accepted_steps(&self) -> impl Iterator<Item = &GuessCheckStep> {
        self.steps.iter().filter(|s| s.accepted)
    }

    /// `(queries, l(x_bar_tau))` after every pass, starting with the initial
    /// query.
    pub fn value_by_query(&self) -> Vec<(usize, f64)> {
        std::iter::once((1, self.initial_value)).chain(self.steps.iter().map(|s| (s.queries, s.value))).collect()
    }
}

fn check_start(domain: &Domain, x1: &RealVector) -> Result<RealVector> {
    if x1.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: x1.dim() });
    }
    if !domain.contains(x1, 1e-10)? {
        return Err(Error::ContractViolation("initial point lies outside the domain".into()));
    }
    domain.project(x1)
}

/// Guess-and-check accelerated method for a `lambda`-strongly convex
/// objective, using the one-step optimistic update with
/// `eta_t = 1 / (lambda alpha_{1:t})`. Each guess of `beta_{t+1}` costs one
/// gradient query; it is kept if `beta_{t+1} = beta_bar` or
/// `beta_{t+1} <= sqrt(lambda / (4 L_{t+1}))`, and otherwise halved (not
/// below `beta_bar`).
#[allow(clippy::too_many_arguments)]
pub fn guess_check_run(
    obj: &dyn Objective,
    domain: &Domain,
    lambda: f64,
    beta1: f64,
    beta_bar: f64,
    budget: usize,
    x1: &RealVector,
) -> Result<GuessCheckRun> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be positive, got {lambda}")));
    }
    if !(beta1 > 0.0 && beta1 <= 1.0) {
        return Err(Error::InvalidParameter(format!("beta1 must lie in (0, 1], got {beta1}")));
    }
    if !(beta_bar >= 0.0 && beta_bar <= beta1) {
        return Err(Error::InvalidParameter(format!("beta_bar must lie in [0, beta1], got {beta_bar}")));
    }
    if budget < 1 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let mut oracle = GradientOracle::deterministic(obj, budget)?;
    let dim = obj.dim();

    // accepted state
    let mut x = check_start(domain, x1)?;
    let mut x_bar = x.clone();
    let mut grad_bar = oracle.gradient(&x_bar)?;
    let mut alpha = 1.0;
    let mut weight_sum = 1.0;
    let mut log2_scale = 0.0; // true weights = stored * 2^log2_scale
    let mut optimism = RealVector::zeros(dim);
    let mut beta = beta1;
    let mut t = 1;
    let initial_value = obj.value(&x_bar)?;
    let mut value = initial_value;

    let mut steps = Vec::with_capacity(budget);
    let mut betas = Vec::new();
    let mut rejections = 0;
    let mut underflow = false;

    while oracle.queries_used() < budget {
        // g_t = alpha_t grad l(x_bar_t) + lambda alpha_t (x_t - x_bar_t)
        let mut g = grad_bar.scale(alpha)?;
        g.add_scaled(lambda * alpha, &x.sub(&x_bar)?)?;
        let eta = 1.0 / (lambda * weight_sum);
        let mut guess = beta;
        while oracle.queries_used() < budget {
            let tried = guess;
            let alpha_next = guess * weight_sum;
            let weight_next = weight_sum + alpha_next;
            let theta = guess / (1.0 + guess);
            // x_tilde = (alpha_{1:t} x_bar + alpha_{t+1} x_t) / alpha_{1:t+1}
            let mut x_tilde = x_bar.scale(1.0 - theta)?;
            x_tilde.add_scaled(theta, &x)?;
            let mut m_next = grad_bar.scale(alpha_next)?;
            m_next.add_scaled(lambda * alpha_next, &x.sub(&x_tilde)?)?;
            let direction = g.sub(&optimism)?.add(&m_next)?;
            let mut target = x.clone();
            target.add_scaled(-eta, &direction)?;
            let x_next = domain.project(&target)?;
            let mut x_bar_next = x_bar.scale(1.0 - theta)?;
            x_bar_next.add_scaled(theta, &x_next)?;
            let grad_next = oracle.gradient(&x_bar_next)?;
            let candidate_value = obj.value(&x_bar_next)?;

            let (accept, smoothness) = if guess == beta_bar {
                (true, None)
            } else {
                let l = empirical_smoothness_with(obj, &x_bar, &grad_bar, &x_bar_next, &grad_next)?;
                let ok = 4.0 * guess * guess * l.as_f64() <= lambda * (1.0 + ACCEPT_RELATIVE_SLACK);
                (ok, Some(l))
            };
            let log2_weight_sum = weight_next.log2() + log2_scale;
            if accept {
                t += 1;
                alpha = alpha_next;
                weight_sum = weight_next;
                x = x_next;
                x_bar = x_bar_next;
                grad_bar = grad_next;
                optimism = m_next;
                beta = guess;
                value = candidate_value;
                betas.push(guess);
                if guess == 0.0 {
                    underflow = true;
                }
                if weight_sum > WEIGHT_RESCALE_ABOVE {
                    let s = 2f64.powi(-WEIGHT_RESCALE_EXP);
                    alpha *= s;
                    weight_sum *= s;
                    optimism = optimism.scale(s)?;
                    log2_scale += WEIGHT_RESCALE_EXP as f64;
                }
            } else {
                rejections += 1;
                guess = (guess / 2.0).max(beta_bar);
            }
            steps.push(GuessCheckStep {
                queries: oracle.queries_used(),
                t: t + usize::from(!accept),
                beta: tried,
                log2_weight_sum,
                eta: eta * 2f64.powf(-log2_scale),
                smoothness,
                accepted: accept,
                candidate_value,
                value,
            });
            if accept {
                break;
            }
        }
        if underflow {
            break;
        }
    }

    Ok(GuessCheckRun {
        value,
        x_bar,
        initial_value,
        lambda,
        beta1,
        beta_bar,
        tau: t,
        queries: oracle.queries_used(),
        budget,
        rejections,
        nonconvergence: underflow || rejections > t - 1,
        betas,
        steps,
    })
}

/// `exp(ln T / T) - 1`.
pub fn thm4_threshold(budget: usize) -> f64 {
    let t = budget as f64;
    (t.ln() / t).exp_m1()
}

/// `beta_1 = 1`, `beta_bar = exp(ln T / T) - 1`: adapts to smooth and
/// Lipschitz objectives alike.
pub fn run_thm4(obj: &dyn Objective, domain: &Domain, lambda: f64, budget: usize, x1: &RealVector) -> Result<GuessCheckRun> {
    guess_check_run(obj, domain, lambda, 1.0, thm4_threshold(budget), budget, x1)
}

/// Known smoothness: `beta_1 = beta_bar = sqrt(lambda / (4 L))`, so the
/// check is never run.
#[allow(non_snake_case)]
pub fn run_cor1_known_L(
    obj: &dyn Objective,
    domain: &Domain,
    lambda: f64,
    smoothness: f64,
    budget: usize,
    x1: &RealVector,
) -> Result<GuessCheckRun> {
    if !(smoothness >= lambda) {
        return Err(Error::InvalidParameter(format!("smoothness {smoothness} is below lambda {lambda}")));
    }
    let beta = (lambda / (4.0 * smoothness)).sqrt();
    guess_check_run(obj, domain, lambda, beta, beta, budget, x1)
}

/// Unknown smoothness: `beta_1 = 1`, `beta_bar = 0`, every step checked.
#[allow(non_snake_case)]
pub fn run_cor1_unknown_L(
    obj: &dyn Objective,
    domain: &Domain,
    lambda: f64,
    budget: usize,
    x1: &RealVector,
) -> Result<GuessCheckRun> {
    guess_check_run(obj, domain, lambda, 1.0, 0.0, budget, x1)
}
