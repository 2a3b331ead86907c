use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::RealVector;
use crate::problems::Objective;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OracleMode {
    Deterministic,
    /// Isotropic Gaussian noise with `E||noise||^2 = sigma^2`.
    Stochastic { sigma: f64, seed: u64 },
}

/// Gradient access to an objective, counted against a query budget.
///
/// Function values are not budgeted.
pub struct GradientOracle<'a> {
    objective: &'a dyn Objective,
    mode: OracleMode,
    noise: Option<(ChaCha8Rng, Normal<f64>)>,
    queries_used: usize,
    budget: usize,
}

impl<'a> GradientOracle<'a> {
    pub fn new(objective: &'a dyn Objective, mode: OracleMode, budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::InvalidParameter("oracle budget must be positive".into()));
        }
        let noise = match mode {
            OracleMode::Deterministic => None,
            OracleMode::Stochastic { sigma, seed } => {
                if !(sigma >= 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidParameter(format!("sigma must be nonnegative, got {sigma}")));
                }
                let sd = sigma / (objective.dim() as f64).sqrt();
                let normal = Normal::new(0.0, sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                Some((ChaCha8Rng::seed_from_u64(seed), normal))
            }
        };
        Ok(GradientOracle { objective, mode, noise, queries_used: 0, budget })
    }

    pub fn deterministic(objective: &'a dyn Objective, budget: usize) -> Result<Self> {
        Self::new(objective, OracleMode::Deterministic, budget)
    }

    pub fn gradient(&mut self, x: &RealVector) -> Result<RealVector> {
        if self.queries_used >= self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let g = self.objective.gradient(x)?;
        self.queries_used += 1;
        match &mut self.noise {
            None => Ok(g),
            Some((rng, normal)) => {
                let noisy = g.iter().map(|gi| gi + normal.sample(rng)).collect();
                RealVector::new(noisy)
            }
        }
    }

    pub fn value(&self, x: &RealVector) -> Result<f64> {
        self.objective.value(x)
    }

    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.mode, OracleMode::Deterministic)
    }

    pub fn queries_used(&self) -> usize {
        self.queries_used
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.queries_used
    }
}
