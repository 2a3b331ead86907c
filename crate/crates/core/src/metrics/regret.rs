use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::online::OnlineTrace;
use crate::problems::{Objective, OnlineSequence, SequenceKind, Structure};

const PGD_TOLERANCE: f64 = 1e-10;
const PGD_MAX_ITERS: usize = 200_000;

/// Best fixed point in hindsight.
#[derive(Clone, Debug, Serialize)]
pub struct Comparator {
    pub point: Option<RealVector>,
    /// `min_x sum_t f_t(x)`; `-inf` for unbounded linear problems.
    pub total_loss: f64,
    /// `false` when found by the approximate inner solver.
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegretReport {
    pub regret: f64,
    pub learner_loss: f64,
    pub comparator: Comparator,
}

/// `argmin_{x in X} <c, x>`, or `None` if unbounded below.
pub fn minimize_linear(domain: &Domain, coef: &RealVector) -> Result<Option<RealVector>> {
    if coef.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: coef.dim() });
    }
    let norm = coef.norm();
    match domain {
        _ if norm == 0.0 => Ok(Some(domain.center())),
        Domain::Ball { center, radius } => {
            let mut p = center.clone();
            p.add_scaled(-radius / norm, coef)?;
            Ok(Some(domain.project(&p)?))
        }
        Domain::Box { lower, upper } => {
            let p: Vec<f64> = (0..coef.dim())
                .map(|i| if coef[i] > 0.0 { lower[i] } else if coef[i] < 0.0 { upper[i] } else { 0.5 * (lower[i] + upper[i]) })
                .collect();
            Ok(Some(RealVector::new(p)?))
        }
        Domain::AllSpace { .. } => Ok(None),
    }
}

/// `argmin_{x in X} 1/2 sum_i e_i (x_i - c_i)^2`. Boxes clamp coordinatewise;
/// balls solve the KKT condition `y_i = e_i b_i / (e_i + mu)` for the
/// multiplier by bisection.
pub fn minimize_diagonal_quadratic(domain: &Domain, center: &RealVector, eigenvalues: &RealVector) -> Result<RealVector> {
    center.check_dim(eigenvalues)?;
    if center.dim() != domain.dim() {
        return Err(Error::DimensionMismatch { expected: domain.dim(), found: center.dim() });
    }
    match domain {
        Domain::Ball { center: o, radius } => {
            let b = center.sub(o)?;
            if b.norm() <= *radius {
                return Ok(center.clone());
            }
            let y = |mu: f64| b.zip_map(eigenvalues, |bi, ei| ei * bi / (ei + mu));
            let emax = eigenvalues.iter().cloned().fold(0.0, f64::max);
            let (mut lo, mut hi) = (0.0, emax * b.norm() / radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if y(mid)?.norm() > *radius {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            domain.project(&o.add(&y(hi)?)?)
        }
        _ => domain.project(center),
    }
}

fn sum_losses(seq: &OnlineSequence, horizon: usize, x: &RealVector) -> Result<f64> {
    (1..=horizon).try_fold(0.0, |acc, t| Ok(acc + seq.at(t).value(x)?))
}

fn approximate_minimizer(f: &dyn Objective, domain: &Domain) -> Result<RealVector> {
    let mut x = domain.center();
    let smooth = f.curvature().smoothness;
    if smooth.is_finite() && smooth > 0.0 {
        for _ in 0..PGD_MAX_ITERS {
            let mut next = x.clone();
            next.add_scaled(-1.0 / smooth, &f.gradient(&x)?)?;
            let next = domain.project(&next)?;
            let moved = next.distance(&x)?;
            x = next;
            if moved <= PGD_TOLERANCE {
                break;
            }
        }
        return Ok(x);
    }
    // projected subgradient with diminishing steps, keeping the best point
    let scale = if domain.is_bounded() { domain.diameter() } else { 1.0 };
    let mut best = (f.value(&x)?, x.clone());
    for k in 1..=PGD_MAX_ITERS {
        let g = f.gradient(&x)?;
        let gn = g.norm();
        if gn == 0.0 {
            return Ok(x);
        }
        x.add_scaled(-scale / (gn * (k as f64).sqrt()), &g)?;
        x = domain.project(&x)?;
        let v = f.value(&x)?;
        if v < best.0 {
            best = (v, x.clone());
        }
    }
    Ok(best.1)
}

/// `argmin_{x in X} sum_{t <= T} f_t(x)` in closed form for linear and
/// quadratic families and structured fixed objectives; otherwise by
/// projected (sub)gradient descent, flagged as approximate.
pub fn best_comparator(seq: &OnlineSequence, horizon: usize, domain: &Domain) -> Result<Comparator> {
    if horizon == 0 {
        return Ok(Comparator { point: Some(domain.center()), total_loss: 0.0, exact: true });
    }
    let linear = |coef: RealVector| -> Result<Comparator> {
        match minimize_linear(domain, &coef)? {
            Some(p) => Ok(Comparator { total_loss: sum_losses(seq, horizon, &p)?, point: Some(p), exact: true }),
            None => Ok(Comparator { point: None, total_loss: f64::NEG_INFINITY, exact: true }),
        }
    };
    let n = horizon as f64;
    let (point, exact) = match seq.kind() {
        SequenceKind::DriftingLinear { base, step } => {
            let mut c = base.scale(n)?;
            c.add_scaled(n * (n + 1.0) / 2.0, step)?;
            return linear(c);
        }
        SequenceKind::AdversarialSwitch { coef } => {
            return linear(coef.scale((horizon % 2) as f64)?);
        }
        SequenceKind::DriftingQuadratic { eigenvalues, .. } => {
            let mut mean = RealVector::zeros(seq.dim());
            for t in 1..=horizon {
                let c = seq.quadratic_center(t).expect("quadratic family");
                mean.add_scaled(1.0 / n, &c)?;
            }
            (minimize_diagonal_quadratic(domain, &mean, eigenvalues)?, true)
        }
        SequenceKind::Fixed(f) => match f.structure() {
            Structure::Linear { coef } => return linear(coef.scale(n)?),
            Structure::DiagonalQuadratic { center, eigenvalues } => {
                (minimize_diagonal_quadratic(domain, center, eigenvalues)?, true)
            }
            Structure::General => match &f.curvature().optimum_point {
                Some(p) if domain.contains(p, 0.0)? => (p.clone(), true),
                _ => (approximate_minimizer(f.as_ref(), domain)?, false),
            },
        },
    };
    Ok(Comparator { total_loss: sum_losses(seq, horizon, &point)?, point: Some(point), exact })
}

/// `sum_t f_t(x_t) - min_{x in X} sum_t f_t(x)`.
pub fn regret(seq: &OnlineSequence, trace: &OnlineTrace, domain: &Domain) -> Result<RegretReport> {
    let comparator = best_comparator(seq, trace.total_rounds, domain)?;
    Ok(RegretReport { regret: trace.total_loss - comparator.total_loss, learner_loss: trace.total_loss, comparator })
}

/// `(t, sum_{s <= t} f_s(x_s) - f_s(u))` for every recorded round.
pub fn partial_regret(seq: &OnlineSequence, trace: &OnlineTrace, comparator: &RealVector) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(trace.rounds.len());
    let mut comp_loss = 0.0;
    let mut s = 0;
    for r in &trace.rounds {
        while s < r.t {
            s += 1;
            comp_loss += seq.at(s).value(comparator)?;
        }
        out.push((r.t, r.cumulative_loss - comp_loss));
    }
    Ok(out)
}
