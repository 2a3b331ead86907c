use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::RealVector;
use crate::problems::{make_linear, make_quadratic, Objective};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceFamily {
    Fixed,
    DriftingLinear,
    DriftingQuadratic,
    AdversarialSwitch,
}

impl std::str::FromStr for SequenceFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed" => Ok(SequenceFamily::Fixed),
            "drifting_linear" => Ok(SequenceFamily::DriftingLinear),
            "drifting_quadratic" => Ok(SequenceFamily::DriftingQuadratic),
            "adversarial_switch" => Ok(SequenceFamily::AdversarialSwitch),
            other => Err(Error::InvalidParameter(format!("unknown sequence family `{other}`"))),
        }
    }
}

impl SequenceFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SequenceFamily::Fixed => "fixed",
            SequenceFamily::DriftingLinear => "drifting_linear",
            SequenceFamily::DriftingQuadratic => "drifting_quadratic",
            SequenceFamily::AdversarialSwitch => "adversarial_switch",
        }
    }
}

/// Concrete description of an online sequence `f_1, f_2, ...`.
#[derive(Clone)]
pub enum SequenceKind {
    /// `f_t = f` for every round.
    Fixed(Arc<dyn Objective>),
    /// `f_t(x) = <base + t * step, x>`.
    DriftingLinear { base: RealVector, step: RealVector },
    /// `f_t(x) = 1/2 sum_i e_i (x_i - c_{t,i})^2` with `c_t` circling `base`
    /// at the given radius and angular frequency (planar in the first two
    /// coordinates, a sine wave in 1-D).
    DriftingQuadratic { eigenvalues: RealVector, base: RealVector, radius: f64, frequency: f64 },
    /// `f_t(x) = <c, x>` on odd rounds, `<-c, x>` on even rounds.
    AdversarialSwitch { coef: RealVector },
}

/// An oblivious online function sequence. Rounds are 1-based.
#[derive(Clone)]
pub struct OnlineSequence {
    kind: SequenceKind,
    dim: usize,
}

impl std::fmt::Debug for OnlineSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OnlineSequence").field("family", &self.family()).field("dim", &self.dim).finish()
    }
}

impl OnlineSequence {
    pub fn fixed(objective: Arc<dyn Objective>) -> Self {
        let dim = objective.dim();
        OnlineSequence { kind: SequenceKind::Fixed(objective), dim }
    }

    pub fn drifting_linear(base: RealVector, step: RealVector) -> Result<Self> {
        base.check_dim(&step)?;
        let dim = base.dim();
        Ok(OnlineSequence { kind: SequenceKind::DriftingLinear { base, step }, dim })
    }

    pub fn drifting_quadratic(eigenvalues: RealVector, base: RealVector, radius: f64, frequency: f64) -> Result<Self> {
        // validates eigenvalues and dimension
        make_quadratic(base.clone(), eigenvalues.clone())?;
        if !(radius >= 0.0 && radius.is_finite() && frequency.is_finite()) {
            return Err(Error::InvalidParameter("drift radius and frequency must be finite, radius >= 0".into()));
        }
        let dim = base.dim();
        Ok(OnlineSequence { kind: SequenceKind::DriftingQuadratic { eigenvalues, base, radius, frequency }, dim })
    }

    pub fn adversarial_switch(coef: RealVector) -> Self {
        let dim = coef.dim();
        OnlineSequence { kind: SequenceKind::AdversarialSwitch { coef }, dim }
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> SequenceFamily {
        match self.kind {
            SequenceKind::Fixed(_) => SequenceFamily::Fixed,
            SequenceKind::DriftingLinear { .. } => SequenceFamily::DriftingLinear,
            SequenceKind::DriftingQuadratic { .. } => SequenceFamily::DriftingQuadratic,
            SequenceKind::AdversarialSwitch { .. } => SequenceFamily::AdversarialSwitch,
        }
    }

    /// Strong-convexity modulus shared by every round.
    pub fn strong_convexity(&self) -> f64 {
        match &self.kind {
            SequenceKind::Fixed(f) => f.curvature().strong_convexity,
            SequenceKind::DriftingQuadratic { eigenvalues, .. } => {
                eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
            }
            _ => 0.0,
        }
    }

    pub(crate) fn quadratic_center(&self, t: usize) -> Option<RealVector> {
        match &self.kind {
            SequenceKind::DriftingQuadratic { base, radius, frequency, .. } => {
                let angle = frequency * t as f64;
                let mut c = base.clone().into_inner();
                if c.len() == 1 {
                    c[0] += radius * angle.sin();
                } else {
                    c[0] += radius * angle.cos();
                    c[1] += radius * angle.sin();
                }
                Some(RealVector::new(c).expect("finite drift"))
            }
            _ => None,
        }
    }

    /// The function revealed at round `t >= 1`.
    pub fn at(&self, t: usize) -> Arc<dyn Objective> {
        assert!(t >= 1, "rounds are 1-based");
        match &self.kind {
            SequenceKind::Fixed(f) => Arc::clone(f),
            SequenceKind::DriftingLinear { base, step } => {
                let c = base.zip_map(step, |b, s| b + t as f64 * s).expect("finite drift");
                Arc::new(make_linear(c))
            }
            SequenceKind::DriftingQuadratic { eigenvalues, .. } => {
                let c = self.quadratic_center(t).expect("quadratic family");
                Arc::new(make_quadratic(c, eigenvalues.clone()).expect("validated at construction"))
            }
            SequenceKind::AdversarialSwitch { coef } => {
                let sign = if t % 2 == 1 { 1.0 } else { -1.0 };
                Arc::new(make_linear(coef.scale(sign).expect("finite coefficient")))
            }
        }
    }

    /// `grad f_t(x) - grad f_{t-1}(x)` when it does not depend on `x`, which
    /// holds for every shipped family.
    pub fn gradient_shift(&self, t: usize) -> Option<RealVector> {
        assert!(t >= 2, "the gradient shift is defined from round 2 on");
        match &self.kind {
            SequenceKind::Fixed(_) => Some(RealVector::zeros(self.dim)),
            SequenceKind::DriftingLinear { step, .. } => Some(step.clone()),
            SequenceKind::DriftingQuadratic { eigenvalues, .. } => {
                let shift = self.quadratic_center(t - 1)?.sub(&self.quadratic_center(t)?).ok()?;
                shift.zip_map(eigenvalues, |s, e| s * e).ok()
            }
            SequenceKind::AdversarialSwitch { coef } => {
                let sign = if t % 2 == 1 { 2.0 } else { -2.0 };
                coef.scale(sign).ok()
            }
        }
    }
}

/// Parameters for [`make_online_sequence`].
#[derive(Clone)]
pub struct SequenceParams {
    pub dim: usize,
    /// Base point: linear coefficient or quadratic center.
    pub base: Option<RealVector>,
    /// Per-round drift magnitude (linear step norm, quadratic drift radius).
    pub drift: f64,
    pub eigenvalues: Option<RealVector>,
    /// Objective repeated by the fixed family.
    pub objective: Option<Arc<dyn Objective>>,
}

/// Builds a sequence of the given family. The seed picks the drift direction
/// for `drifting_linear` and the angular frequency for `drifting_quadratic`.
pub fn make_online_sequence(family: SequenceFamily, params: &SequenceParams, seed: u64) -> Result<OnlineSequence> {
    if params.dim == 0 {
        return Err(Error::InvalidParameter("sequence dimension must be positive".into()));
    }
    if !(params.drift >= 0.0 && params.drift.is_finite()) {
        return Err(Error::InvalidParameter(format!("drift must be finite and nonnegative, got {}", params.drift)));
    }
    let base = match &params.base {
        Some(b) if b.dim() != params.dim => {
            return Err(Error::DimensionMismatch { expected: params.dim, found: b.dim() })
        }
        Some(b) => b.clone(),
        None => RealVector::basis(params.dim, 0),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        SequenceFamily::Fixed => {
            let obj = params
                .objective
                .clone()
                .ok_or_else(|| Error::InvalidParameter("fixed family needs an objective".into()))?;
            Ok(OnlineSequence::fixed(obj))
        }
        SequenceFamily::DriftingLinear => {
            let dir: Vec<f64> = (0..params.dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let dir = RealVector::new(dir)?;
            let n = dir.norm();
            let step = if n > 0.0 { dir.scale(params.drift / n)? } else { RealVector::zeros(params.dim) };
            OnlineSequence::drifting_linear(base, step)
        }
        SequenceFamily::DriftingQuadratic => {
            let eig = params.eigenvalues.clone().unwrap_or_else(|| RealVector::filled(params.dim, 1.0).unwrap());
            let frequency = 0.05 + 0.1 * rand::Rng::random::<f64>(&mut rng);
            OnlineSequence::drifting_quadratic(eig, base, params.drift, frequency)
        }
        SequenceFamily::AdversarialSwitch => Ok(OnlineSequence::adversarial_switch(base)),
    }
}
