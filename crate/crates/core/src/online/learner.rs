use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::online::StepSchedule;

/// Feasibility slack accepted for user-supplied starting points.
const FEASIBILITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Predict,
    Update,
}

/// Two-step optimistic OGD:
///
/// ```text
/// x_t       = Proj[x_hat_t - eta_t M_t]
/// x_hat_t+1 = Proj[x_hat_t - eta_t grad_t]
/// ```
///
/// Each round is one [`predict`](Self::predict) followed by one
/// [`update`](Self::update).
#[derive(Clone, Debug)]
pub struct OptimisticOgd {
    domain: Domain,
    x_hat: RealVector,
    x_play: RealVector,
    optimism: RealVector,
    schedule: StepSchedule,
    round: usize,
    eta: f64,
    phase: Phase,
}

impl OptimisticOgd {
    pub fn new(domain: Domain, x1: RealVector, schedule: StepSchedule) -> Result<Self> {
        if x1.dim() != domain.dim() {
            return Err(Error::DimensionMismatch { expected: domain.dim(), found: x1.dim() });
        }
        if !domain.contains(&x1, FEASIBILITY_TOL)? {
            return Err(Error::ContractViolation("initial point lies outside the domain".into()));
        }
        let x1 = domain.project(&x1)?;
        Ok(OptimisticOgd {
            optimism: RealVector::zeros(domain.dim()),
            x_play: x1.clone(),
            x_hat: x1,
            domain,
            schedule,
            round: 1,
            eta: f64::NAN,
            phase: Phase::Predict,
        })
    }

    /// Plays `x_t = Proj[x_hat_t - eta_t M_t]` and remembers `M_t`.
    pub fn predict(&mut self, optimism: RealVector) -> Result<&RealVector> {
        if self.phase != Phase::Predict {
            return Err(Error::ContractViolation("predict called twice without an update".into()));
        }
        self.x_hat.check_dim(&optimism)?;
        let eta = self.schedule.step_size(self.round);
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::ContractViolation(format!("step size {eta} at round {} is not usable", self.round)));
        }
        let mut target = self.x_hat.clone();
        target.add_scaled(-eta, &optimism)?;
        self.x_play = self.domain.project(&target)?;
        self.optimism = optimism;
        self.eta = eta;
        self.phase = Phase::Update;
        Ok(&self.x_play)
    }

    /// Consumes `grad f_t(x_t)` and advances to the next round.
    pub fn update(&mut self, grad: &RealVector) -> Result<()> {
        if self.phase != Phase::Update {
            return Err(Error::ContractViolation("update called without an interleaved predict".into()));
        }
        let mut target = self.x_hat.clone();
        target.add_scaled(-self.eta, grad)?;
        self.x_hat = self.domain.project(&target)?;
        self.schedule.record(grad.sub(&self.optimism)?.norm_sq());
        self.round += 1;
        self.phase = Phase::Predict;
        Ok(())
    }

    pub fn x_hat(&self) -> &RealVector {
        &self.x_hat
    }

    pub fn x_play(&self) -> &RealVector {
        &self.x_play
    }

    pub fn optimism(&self) -> &RealVector {
        &self.optimism
    }

    /// Current round index, starting at 1.
    pub fn round(&self) -> usize {
        self.round
    }

    /// Step size used in the most recent predict.
    pub fn last_step_size(&self) -> f64 {
        self.eta
    }

    pub fn schedule(&self) -> &StepSchedule {
        &self.schedule
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }
}

/// One-step optimistic OGD: `Proj[x_t - eta_t (g_t - M_t + M_{t+1})]`.
pub fn one_step_update(
    x: &RealVector,
    grad: &RealVector,
    optimism: &RealVector,
    next_optimism: &RealVector,
    eta: f64,
    domain: &Domain,
) -> Result<RealVector> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("step size must be positive, got {eta}")));
    }
    let direction = grad.sub(optimism)?.add(next_optimism)?;
    let mut target = x.clone();
    target.add_scaled(-eta, &direction)?;
    domain.project(&target)
}

/// A learner that plays points and receives linear-loss gradients.
pub trait OnlineLearner {
    fn play(&mut self) -> Result<RealVector>;
    fn observe(&mut self, grad: &RealVector) -> Result<()>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimismRule {
    /// `M_t = 0`, i.e. plain projected OGD.
    Zero,
    /// `M_1 = 0`, `M_t = grad_{t-1}`.
    LastGradient,
}

/// [`OptimisticOgd`] driven by a fixed optimism rule.
#[derive(Clone, Debug)]
pub struct OptimisticLearner {
    ogd: OptimisticOgd,
    rule: OptimismRule,
    last_grad: Option<RealVector>,
}

impl OptimisticLearner {
    pub fn new(ogd: OptimisticOgd, rule: OptimismRule) -> Self {
        OptimisticLearner { ogd, rule, last_grad: None }
    }

    pub fn inner(&self) -> &OptimisticOgd {
        &self.ogd
    }
}

impl OnlineLearner for OptimisticLearner {
    fn play(&mut self) -> Result<RealVector> {
        let m = match (&self.rule, &self.last_grad) {
            (OptimismRule::LastGradient, Some(g)) => g.clone(),
            _ => RealVector::zeros(self.ogd.domain().dim()),
        };
        self.ogd.predict(m).cloned()
    }

    fn observe(&mut self, grad: &RealVector) -> Result<()> {
        self.ogd.update(grad)?;
        self.last_grad = Some(grad.clone());
        Ok(())
    }
}
