use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::problems::{GradientOracle, Objective};
use crate::strongly_convex::guess_check::{guess_check_run, GuessCheckRun};

/// Attempts at finding a probe pair with distinct gradients.
pub const MAX_PROBE_RESCALES: u32 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct GridInstance {
    pub index: usize,
    pub lambda: f64,
    pub value: f64,
    /// `None` if the instance failed numerically; it then takes no part in
    /// the final selection.
    pub run: Option<GuessCheckRun>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSearchRun {
    pub x: RealVector,
    pub value: f64,
    /// `0` means the starting point won.
    pub best_index: usize,
    pub lambda_hat: f64,
    pub instances: Vec<GridInstance>,
    pub instance_budget: usize,
    /// Gradient queries spent on the curvature probe.
    pub probe_queries: usize,
    /// Probe plus all instance queries.
    pub queries: usize,
}

/// `M = ceil(2 log2 T)`.
pub fn grid_count(budget: usize) -> usize {
    (2.0 * (budget as f64).log2()).ceil() as usize
}

fn probe_lambda(obj: &dyn Objective, x0: &RealVector) -> Result<(f64, usize)> {
    let mut oracle = GradientOracle::deterministic(obj, 1 + MAX_PROBE_RESCALES as usize)?;
    let ga = oracle.gradient(x0)?;
    let e1 = RealVector::basis(x0.dim(), 0);
    for k in 0..MAX_PROBE_RESCALES {
        let step = 2f64.powi(k as i32);
        let mut b = x0.clone();
        b.add_scaled(step, &e1)?;
        let gb = oracle.gradient(&b)?;
        let lambda_hat = ga.sub(&gb)?.norm() / b.sub(x0)?.norm();
        if lambda_hat > 0.0 && lambda_hat.is_finite() {
            return Ok((lambda_hat, oracle.queries_used()));
        }
    }
    Err(Error::ContractViolation(format!(
        "curvature probe found identical gradients after {MAX_PROBE_RESCALES} rescalings"
    )))
}

/// Grid search over `lambda_i = 2^-i lambda_hat`, `i = 1..M`, each instance a
/// guess-and-check run with `beta_1 = 1`, `beta_bar = 0` and budget
/// `floor(T / M)`. Returns the point with the smallest objective value among
/// the instance outputs and `x0`, ties to the lowest index.
pub fn grid_search_run(obj: &dyn Objective, budget: usize, x0: &RealVector) -> Result<GridSearchRun> {
    if budget < 2 {
        return Err(Error::InvalidParameter(format!("grid search needs a budget of at least 2, got {budget}")));
    }
    let m = grid_count(budget);
    if budget < 2 * m {
        return Err(Error::InvalidParameter(format!("budget {budget} is below 2M = {}", 2 * m)));
    }
    if x0.dim() != obj.dim() {
        return Err(Error::DimensionMismatch { expected: obj.dim(), found: x0.dim() });
    }
    let domain = Domain::all_space(obj.dim())?;
    let (lambda_hat, probe_queries) = probe_lambda(obj, x0)?;
    let instance_budget = budget / m;

    let instances: Vec<GridInstance> = (1..=m)
        .into_par_iter()
        .map(|i| {
            let lambda = lambda_hat * 2f64.powi(-(i as i32));
            match guess_check_run(obj, &domain, lambda, 1.0, 0.0, instance_budget, x0) {
                Ok(run) => GridInstance { index: i, lambda, value: run.value, run: Some(run), error: None },
                Err(e) => GridInstance { index: i, lambda, value: f64::NAN, run: None, error: Some(e.to_string()) },
            }
        })
        .collect();

    let mut best_index = 0;
    let mut best_value = obj.value(x0)?;
    for inst in &instances {
        if inst.run.is_some() && inst.value < best_value {
            best_index = inst.index;
            best_value = inst.value;
        }
    }
    let x = if best_index == 0 {
        x0.clone()
    } else {
        instances[best_index - 1].run.as_ref().map(|r| r.x_bar.clone()).expect("selected instance has a run")
    };
    let queries = probe_queries + instances.iter().filter_map(|i| i.run.as_ref()).map(|r| r.queries).sum::<usize>();
    Ok(GridSearchRun {
        x,
        value: best_value,
        best_index,
        lambda_hat,
        instances,
        instance_budget,
        probe_queries,
        queries,
    })
}
