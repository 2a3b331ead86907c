use crate::conversion::stabilized::{stabilization_residual, ConversionRound, ConversionRun, WeightedAverage};
use crate::conversion::o2b_run;
use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::online::{OptimismRule, OptimisticLearner, OptimisticOgd, StepSchedule, DEFAULT_ADAGRAD_FLOOR};
use crate::problems::{GradientOracle, Objective, OracleMode};

#[derive(Clone, Debug)]
pub struct UniversalOptions {
    /// Starting point; the domain center when `None`.
    pub x1: Option<RealVector>,
    pub adagrad_floor: f64,
}

impl Default for UniversalOptions {
    fn default() -> Self {
        UniversalOptions { x1: None, adagrad_floor: DEFAULT_ADAGRAD_FLOOR }
    }
}

fn start_point(domain: &Domain, x1: &Option<RealVector>) -> RealVector {
    x1.clone().unwrap_or_else(|| domain.center())
}

/// Universal convex optimizer: stabilized conversion with weights
/// `alpha_t = t`, optimistic OGD with AdaGrad steps, and optimism
/// `M_t = alpha_t g(x_tilde_t)` where
/// `x_tilde_t = (sum_{s<t} alpha_s x_s + alpha_t x_{t-1}) / alpha_{1:t}`.
///
/// Round 1 costs one gradient query and every later round costs two, so a
/// budget of `T` queries gives `floor((T + 1) / 2)` rounds.
pub fn universal_convex_optimize(
    obj: &dyn Objective,
    domain: &Domain,
    budget: usize,
    mode: OracleMode,
    opts: &UniversalOptions,
) -> Result<ConversionRun> {
    if !domain.is_bounded() {
        return Err(Error::InfiniteDiameter);
    }
    if obj.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: obj.dim() });
    }
    let schedule = StepSchedule::adagrad(domain.diameter(), opts.adagrad_floor)?;
    let mut ogd = OptimisticOgd::new(domain.clone(), start_point(domain, &opts.x1), schedule)?;
    let mut oracle = GradientOracle::new(obj, mode, budget)?;
    let dim = obj.dim();
    let mut avg = WeightedAverage::new(dim);
    let mut rounds: Vec<ConversionRound> = Vec::with_capacity(budget / 2 + 1);

    let mut t = 1;
    loop {
        let needed = if t == 1 { 1 } else { 2 };
        if oracle.remaining() < needed {
            break;
        }
        let alpha = t as f64;
        let (probe, optimism) = match rounds.last() {
            None => (None, RealVector::zeros(dim)),
            Some(prev) => {
                let probe = avg.peek(alpha, &prev.x)?;
                let g = oracle.gradient(&probe)?;
                let m = g.scale(alpha)?;
                (Some(probe), m)
            }
        };
        let x = ogd.predict(optimism)?.clone();
        let eta = ogd.last_step_size();
        let prev_sum = avg.weight_sum();
        let x_bar = avg.push(alpha, x.clone())?;
        let grad_bar = oracle.gradient(&x_bar)?;
        ogd.update(&grad_bar.scale(alpha)?)?;
        let residual = stabilization_residual(prev_sum, rounds.last().map(|r| &r.x_bar), alpha, &x_bar, &x)?;
        rounds.push(ConversionRound {
            t,
            queries: oracle.queries_used(),
            alpha,
            weight_sum: avg.weight_sum(),
            value: obj.value(&x_bar)?,
            x,
            x_bar,
            grad_bar,
            probe,
            eta: Some(eta),
            accumulator: ogd.schedule().accumulator(),
            stabilization_residual: residual,
        });
        t += 1;
    }
    let x_bar = rounds.last().map(|r| r.x_bar.clone()).ok_or(Error::BudgetExhausted { budget })?;
    Ok(ConversionRun { x_bar, rounds, queries: oracle.queries_used(), weight_sum: avg.weight_sum() })
}

/// Plain averaged AdaGrad OGD: uniform weights and no optimism. One query
/// per round.
pub fn baseline_ogd(
    obj: &dyn Objective,
    domain: &Domain,
    budget: usize,
    mode: OracleMode,
    opts: &UniversalOptions,
) -> Result<ConversionRun> {
    let schedule = StepSchedule::adagrad(domain.diameter(), opts.adagrad_floor)?;
    let ogd = OptimisticOgd::new(domain.clone(), start_point(domain, &opts.x1), schedule)?;
    let mut learner = OptimisticLearner::new(ogd, OptimismRule::Zero);
    let mut oracle = GradientOracle::new(obj, mode, budget)?;
    o2b_run(&mut learner, &mut oracle, |_| 1.0, budget)
}
