use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::RealVector;
use crate::online::OnlineLearner;
use crate::problems::GradientOracle;

/// Rounds between compensated recomputations of the weighted sum.
const RESUM_PERIOD: usize = 1 << 10;

/// Running weighted average `x_bar_t = (sum_s alpha_s x_s) / alpha_{1:t}`.
#[derive(Clone, Debug)]
pub struct WeightedAverage {
    weighted_sum: RealVector,
    weight_sum: f64,
    history: Vec<(f64, RealVector)>,
}

impl WeightedAverage {
    pub fn new(dim: usize) -> Self {
        WeightedAverage { weighted_sum: RealVector::zeros(dim), weight_sum: 0.0, history: Vec::new() }
    }

    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }

    pub fn weighted_sum(&self) -> &RealVector {
        &self.weighted_sum
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    /// Average that would result from adding `(alpha, x)`, without adding it.
    pub fn peek(&self, alpha: f64, x: &RealVector) -> Result<RealVector> {
        let mut s = self.weighted_sum.clone();
        s.add_scaled(alpha, x)?;
        s.scale(1.0 / (self.weight_sum + alpha))
    }

    pub fn push(&mut self, alpha: f64, x: RealVector) -> Result<RealVector> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("conversion weights must be positive, got {alpha}")));
        }
        self.weighted_sum.add_scaled(alpha, &x)?;
        self.weight_sum += alpha;
        self.history.push((alpha, x));
        if self.history.len().is_multiple_of(RESUM_PERIOD) {
            self.resum()?;
        }
        self.average()
    }

    pub fn average(&self) -> Result<RealVector> {
        self.weighted_sum.scale(1.0 / self.weight_sum)
    }

    /// Recomputes the sums from the stored history with Neumaier summation.
    fn resum(&mut self) -> Result<()> {
        let d = self.weighted_sum.dim();
        let (mut sum, mut comp) = (vec![0.0; d], vec![0.0; d]);
        let (mut wsum, mut wcomp) = (0.0, 0.0);
        for (alpha, x) in &self.history {
            for i in 0..d {
                neumaier(&mut sum[i], &mut comp[i], alpha * x[i]);
            }
            neumaier(&mut wsum, &mut wcomp, *alpha);
        }
        self.weighted_sum = RealVector::new(sum.iter().zip(&comp).map(|(s, c)| s + c).collect())?;
        self.weight_sum = wsum + wcomp;
        Ok(())
    }
}

fn neumaier(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

#[derive(Clone, Debug, Serialize)]
pub struct ConversionRound {
    pub t: usize,
    /// Oracle queries used once this round finished.
    pub queries: usize,
    pub alpha: f64,
    /// `alpha_{1:t}`.
    pub weight_sum: f64,
    /// Learner iterate `x_t`.
    pub x: RealVector,
    /// Weighted average `x_bar_t`.
    pub x_bar: RealVector,
    /// Gradient estimate `g(x_bar_t)`.
    pub grad_bar: RealVector,
    /// Probe point `x_tilde_t`, when the method uses one.
    pub probe: Option<RealVector>,
    pub eta: Option<f64>,
    pub accumulator: Option<f64>,
    /// `l(x_bar_t)` (unbudgeted value query).
    pub value: f64,
    /// Relative residual of `alpha_{1:t-1}(x_bar_{t-1} - x_bar_t) = alpha_t (x_bar_t - x_t)`.
    pub stabilization_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConversionRun {
    pub x_bar: RealVector,
    pub rounds: Vec<ConversionRound>,
    pub queries: usize,
    pub weight_sum: f64,
}

impl ConversionRun {
    pub fn max_stabilization_residual(&self) -> f64 {
        self.rounds.iter().map(|r| r.stabilization_residual).fold(0.0, f64::max)
    }

    pub fn rounds_completed(&self) -> usize {
        self.rounds.len()
    }
}

/// Relative residual of the stabilization identity for one round.
pub fn stabilization_residual(
    prev_weight_sum: f64,
    prev_bar: Option<&RealVector>,
    alpha: f64,
    x_bar: &RealVector,
    x: &RealVector,
) -> Result<f64> {
    let Some(prev_bar) = prev_bar else {
        // first round: x_bar_1 = x_1
        let scale = alpha * 1f64.max(x.norm_inf());
        return Ok(alpha * x_bar.sub(x)?.norm_inf() / scale);
    };
    let lhs = prev_bar.sub(x_bar)?.scale(prev_weight_sum)?;
    let rhs = x_bar.sub(x)?.scale(alpha)?;
    let scale = (prev_weight_sum + alpha) * 1f64.max(x.norm_inf()).max(x_bar.norm_inf());
    Ok(lhs.sub(&rhs)?.norm_inf() / scale)
}

/// `sum_t alpha_t <g(x_bar_t), x_t - u>`.
pub fn weighted_regret(rounds: &[ConversionRound], comparator: &RealVector) -> Result<f64> {
    rounds.iter().try_fold(0.0, |acc, r| Ok(acc + r.alpha * r.grad_bar.dot(&r.x.sub(comparator)?)?))
}

/// Stabilized online-to-batch conversion: query the gradient at the running
/// weighted average, feed `alpha_t g(x_bar_t)` to the learner as a linear
/// loss. Stops after `rounds` rounds or when the oracle budget runs out.
pub fn o2b_run<L: OnlineLearner>(
    learner: &mut L,
    oracle: &mut GradientOracle<'_>,
    weights: impl Fn(usize) -> f64,
    rounds: usize,
) -> Result<ConversionRun> {
    let dim = oracle.objective().dim();
    let mut avg = WeightedAverage::new(dim);
    let mut records = Vec::with_capacity(rounds);
    let mut prev_bar: Option<RealVector> = None;

    for t in 1..=rounds {
        if oracle.remaining() == 0 {
            break;
        }
        let x = learner.play()?;
        let alpha = weights(t);
        let prev_sum = avg.weight_sum();
        let x_bar = avg.push(alpha, x.clone())?;
        let grad_bar = oracle.gradient(&x_bar)?;
        learner.observe(&grad_bar.scale(alpha)?)?;
        records.push(ConversionRound {
            t,
            queries: oracle.queries_used(),
            alpha,
            weight_sum: avg.weight_sum(),
            stabilization_residual: stabilization_residual(prev_sum, prev_bar.as_ref(), alpha, &x_bar, &x)?,
            value: oracle.value(&x_bar)?,
            x,
            x_bar: x_bar.clone(),
            grad_bar,
            probe: None,
            eta: None,
            accumulator: None,
        });
        prev_bar = Some(x_bar);
    }
    let x_bar = prev_bar.ok_or(Error::BudgetExhausted { budget: oracle.budget() })?;
    Ok(ConversionRun { x_bar, rounds: records, queries: oracle.queries_used(), weight_sum: avg.weight_sum() })
}
