use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conversion::{universal_convex_optimize, weighted_regret, ConversionRun, UniversalOptions};
use crate::error::{Error, Result};
use crate::experiment::constrained_optimum;
use crate::math::{Domain, RealVector};
use crate::metrics::{geometric_rate, loglog_fit, regret};
use crate::online::{run_online_convex, run_online_strongly_convex, OnlineRunOptions, OnlineTrace};
use crate::problems::{
    make_holder_power, make_linear, make_nonsmooth, make_online_sequence, make_quadratic, verify_holder,
    verify_inexact_smoothness, Objective, OnlineSequence, OracleMode, SequenceFamily, SequenceParams,
};
use crate::strongly_convex::{
    grid_count, grid_search_run, run_cor1_known_L, run_cor1_unknown_L, run_thm4, EmpiricalSmoothness, GuessCheckRun,
    ACCEPT_RELATIVE_SLACK,
};

pub const SUITES: [&str; 4] = ["convex_rates", "strongly_convex_rates", "online_regret", "holder_checks"];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    let criteria = match name {
        "convex_rates" => vec![
            convex_slope("1", "convex smooth acceleration", &quadratic(10.0)?, Some((f64::NEG_INFINITY, -1.8)))?,
            convex_slope("2", "convex Hölder interpolation", &make_holder_power(center(), 0.5)?, Some((-1.45, -1.05)))?,
            convex_slope("3", "convex nonsmooth", &make_nonsmooth(center(), 0.0)?, Some((-0.65, -0.40)))?,
            stochastic_floor()?,
        ],
        "strongly_convex_rates" => vec![strongly_convex_geometric()?, strongly_convex_nonsmooth()?, grid_vs_cor1()?],
        "online_regret" => vec![online_convex_regret()?, online_strongly_convex_regret()?],
        "holder_checks" => vec![
            conversion_certificates()?,
            guess_check_certificates()?,
            self_confident_tuning()?,
            projection_checks()?,
            smoothness_sampling()?,
        ],
        _ => return Err(Error::Config(format!("suite: unknown suite '{name}'"))),
    };
    Ok(SuiteReport { suite: name.to_string(), criteria })
}

const DIM: usize = 5;
const RADIUS: f64 = 2.0;

fn center() -> RealVector {
    RealVector::new(vec![1.0, -0.5, 0.5, -1.0, 0.25]).unwrap()
}

fn ball() -> Domain {
    Domain::centered_ball(DIM, RADIUS).unwrap()
}

fn linspace(lo: f64, hi: f64) -> RealVector {
    RealVector::new((0..DIM).map(|i| lo + (hi - lo) * i as f64 / (DIM - 1) as f64).collect()).unwrap()
}

/// Quadratic around [`center`] with eigenvalues spread over `[1, kappa]`.
fn quadratic(kappa: f64) -> Result<crate::problems::Quadratic> {
    make_quadratic(center(), linspace(1.0, kappa))
}

fn result(id: &str, name: &str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult { id: id.to_string(), name: name.to_string(), passed, detail }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `max <= 3 median` with a positive median.
fn bounded_ratio(values: &[f64]) -> (bool, f64) {
    let med = median(values);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ratio = max / med;
    (med > 0.0 && ratio <= 3.0, ratio)
}

fn fmt_list(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|v| format!("{v:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn optimum_value(obj: &dyn Objective, domain: &Domain) -> Result<f64> {
    constrained_optimum(obj, domain)?
        .map(|(_, v)| v)
        .ok_or_else(|| Error::InvalidParameter(format!("{}: no reference optimum", obj.name())))
}

/// Failure description when the conversion inequality
/// `l(x_bar) - l(u) <= weighted regret / alpha_{1:T}` or the stabilization
/// identity breaks.
fn conversion_violation(obj: &dyn Objective, domain: &Domain, run: &ConversionRun) -> Result<Option<String>> {
    let Some((u, opt)) = constrained_optimum(obj, domain)? else {
        return Ok(None);
    };
    let gap = obj.value(&run.x_bar)? - opt;
    let bound = weighted_regret(&run.rounds, &u)? / run.weight_sum;
    let tol = 1e-9 * opt.abs().max(1.0);
    if gap > bound + tol {
        return Ok(Some(format!("{}: gap {gap:.3e} above certificate {bound:.3e}", obj.name())));
    }
    let res = run.max_stabilization_residual();
    if res > 1e-10 {
        return Ok(Some(format!("{}: stabilization residual {res:.3e}", obj.name())));
    }
    Ok(None)
}

/// Failure description when beta increases, drops below the threshold, or an
/// accepted checked step violates `4 beta^2 L <= lambda`.
fn guess_check_violation(run: &GuessCheckRun) -> Option<String> {
    if run.queries > run.budget {
        return Some(format!("{} queries over budget {}", run.queries, run.budget));
    }
    let mut prev = run.beta1;
    for &b in &run.betas {
        if b > prev || b < run.beta_bar {
            return Some(format!("beta sequence broke monotonicity at {b:.6e} after {prev:.6e}"));
        }
        prev = b;
    }
    for step in run.accepted_steps() {
        if let Some(EmpiricalSmoothness::Value(l)) = step.smoothness {
            if 4.0 * step.beta * step.beta * l > run.lambda * (1.0 + ACCEPT_RELATIVE_SLACK) {
                return Some(format!("accepted beta {:.6e} with L {l:.6e} at t = {}", step.beta, step.t));
            }
        }
    }
    None
}

fn convex_slope(id: &str, name: &str, obj: &dyn Objective, window: Option<(f64, f64)>) -> Result<CriterionResult> {
    let domain = ball();
    let opt = optimum_value(obj, &domain)?;
    let budgets: Vec<usize> = (5..=10).map(|k| 1usize << k).collect();
    let runs: Vec<Result<(usize, f64, Option<String>)>> = budgets
        .par_iter()
        .map(|&t| {
            let run = universal_convex_optimize(obj, &domain, t, OracleMode::Deterministic, &UniversalOptions::default())?;
            let violation = conversion_violation(obj, &domain, &run)?;
            Ok((t, obj.value(&run.x_bar)? - opt, violation))
        })
        .collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let finals: Vec<f64> = runs.iter().map(|r| r.1).collect();
    if let Some(v) = runs.iter().find_map(|r| r.2.clone()) {
        return Ok(result(id, name, false, format!("certificate failed: {v}")));
    }
    let points: Vec<(f64, f64)> = runs.iter().filter(|r| r.1 > 0.0).map(|r| (r.0 as f64, r.1)).collect();
    let fit = loglog_fit(&points)?;
    let (lo, hi) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let passed = fit.slope >= lo && fit.slope <= hi;
    let detail = format!("slope {:.3} (window [{lo}, {hi}]), finals {}", fit.slope, fmt_list(&finals));
    Ok(result(id, name, passed, detail))
}

fn stochastic_floor() -> Result<CriterionResult> {
    let obj = quadratic(10.0)?;
    let domain = ball();
    let opt = optimum_value(&obj, &domain)?;
    let budgets: Vec<usize> = (8..=12).map(|k| 1usize << k).collect();
    let jobs: Vec<(usize, u64)> = budgets.iter().flat_map(|&t| (1..=20u64).map(move |s| (t, s))).collect();
    let gaps: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(t, seed)| {
            let mode = OracleMode::Stochastic { sigma: 1.0, seed };
            let run = universal_convex_optimize(&obj, &domain, t, mode, &UniversalOptions::default())?;
            Ok(obj.value(&run.x_bar)? - opt)
        })
        .collect();
    let gaps = gaps.into_iter().collect::<Result<Vec<_>>>()?;
    let means: Vec<f64> = gaps.chunks(20).map(|c| c.iter().sum::<f64>() / 20.0).collect();
    let points: Vec<(f64, f64)> = budgets.iter().zip(&means).map(|(&t, &m)| (t as f64, m)).collect();
    let slope = loglog_fit(&points)?.slope;
    let passed = (-0.65..=-0.40).contains(&slope);
    let detail = format!("slope {slope:.3} (window [-0.65, -0.4]), mean finals {}", fmt_list(&means));
    Ok(result("4", "stochastic floor", passed, detail))
}

fn strongly_convex_geometric() -> Result<CriterionResult> {
    let domain = ball();
    let x1 = domain.center();
    let mut passed = true;
    let mut parts = Vec::new();
    for kappa in [4.0f64, 25.0, 100.0] {
        let obj = quadratic(kappa)?;
        let opt = optimum_value(&obj, &domain)?;
        let run = run_thm4(&obj, &domain, 1.0, 2000, &x1)?;
        if let Some(v) = guess_check_violation(&run) {
            return Ok(result("5", "strongly convex accelerated", false, format!("kappa {kappa}: {v}")));
        }
        let points: Vec<(f64, f64)> = run
            .value_by_query()
            .into_iter()
            .map(|(c, v)| (c as f64, v - opt))
            .filter(|p| p.1 > 1e-24)
            .collect();
        let g = geometric_rate(&points)?;
        let need = 0.8 / (6.0 * kappa.sqrt());
        passed &= g.rho >= need && g.r_squared >= 0.95;
        parts.push(format!("kappa {kappa}: rho {:.4} (need {need:.4}) r2 {:.4}", g.rho, g.r_squared));
    }
    Ok(result("5", "strongly convex accelerated", passed, parts.join("; ")))
}

fn strongly_convex_nonsmooth() -> Result<CriterionResult> {
    let obj = make_nonsmooth(center(), 1.0)?;
    let domain = ball();
    let x1 = domain.center();
    let opt = optimum_value(&obj, &domain)?;
    let mut scaled = Vec::new();
    for k in 7..=12 {
        let t = 1usize << k;
        let run = run_thm4(&obj, &domain, 1.0, t, &x1)?;
        if let Some(v) = guess_check_violation(&run) {
            return Ok(result("6", "strongly convex nonsmooth", false, format!("T {t}: {v}")));
        }
        scaled.push((run.value - opt) * t as f64 / (t as f64).ln());
    }
    let (passed, ratio) = bounded_ratio(&scaled);
    let detail = format!("eps*T/log T {} max/median {ratio:.3}", fmt_list(&scaled));
    Ok(result("6", "strongly convex nonsmooth", passed, detail))
}

fn grid_vs_cor1() -> Result<CriterionResult> {
    let obj = quadratic(100.0)?;
    let domain = Domain::all_space(DIM)?;
    let x0 = RealVector::zeros(DIM);
    let budget = 4096;
    let grid = grid_search_run(&obj, budget, &x0)?;
    for inst in &grid.instances {
        if let Some(v) = inst.run.as_ref().and_then(guess_check_violation) {
            return Ok(result("7", "grid search", false, format!("instance {}: {v}", inst.index)));
        }
    }
    let reference = run_cor1_unknown_L(&obj, &domain, 1.0, budget / grid_count(budget), &x0)?;
    let opt = optimum_value(&obj, &domain)?;
    let (g, r) = (grid.value - opt, reference.value - opt);
    let detail = format!("grid {g:.3e} (instance {}, lambda_hat {:.3}) vs reference {r:.3e}", grid.best_index, grid.lambda_hat);
    Ok(result("7", "grid search", g <= 10.0 * r, detail))
}

fn online_budgets() -> Vec<usize> {
    (8..=14).map(|k| 1usize << k).collect()
}

fn fixed_sequence() -> Result<OnlineSequence> {
    Ok(OnlineSequence::fixed(Arc::new(make_quadratic(center(), linspace(1.0, 5.0))?)))
}

fn online_regrets(
    seq: &OnlineSequence,
    run: impl Fn(usize) -> Result<OnlineTrace> + Sync,
) -> Result<(Vec<f64>, Option<String>)> {
    let domain = ball();
    let out: Vec<Result<(f64, Option<String>)>> = online_budgets()
        .par_iter()
        .map(|&t| {
            let trace = run(t)?;
            let violation = self_confident_violation(&trace).or_else(|| {
                (trace.max_infeasibility > 1e-12).then(|| format!("iterate left the domain by {:.3e}", trace.max_infeasibility))
            });
            Ok((regret(seq, &trace, &domain)?.regret, violation))
        })
        .collect();
    let out = out.into_iter().collect::<Result<Vec<_>>>()?;
    let violation = out.iter().find_map(|o| o.1.clone());
    Ok((out.into_iter().map(|o| o.0).collect(), violation))
}

fn online_convex_regret() -> Result<CriterionResult> {
    let domain = ball();
    let opts = OnlineRunOptions::default();
    let fixed = fixed_sequence()?;
    let switch = OnlineSequence::adversarial_switch(RealVector::basis(DIM, 0));
    let (a, va) = online_regrets(&fixed, |t| run_online_convex(&fixed, &domain, t, &opts))?;
    let (b, vb) = online_regrets(&switch, |t| run_online_convex(&switch, &domain, t, &opts))?;
    if let Some(v) = va.or(vb) {
        return Ok(result("8", "online regret interpolation", false, v));
    }
    let b: Vec<f64> = b.iter().zip(online_budgets()).map(|(r, t)| r / (t as f64).sqrt()).collect();
    let (pa, ra) = bounded_ratio(&a);
    let (pb, rb) = bounded_ratio(&b);
    let detail = format!(
        "fixed Reg {} max/median {ra:.3}; switch Reg/sqrt(T) {} max/median {rb:.3}",
        fmt_list(&a),
        fmt_list(&b)
    );
    Ok(result("8", "online regret interpolation", pa && pb, detail))
}

fn online_strongly_convex_regret() -> Result<CriterionResult> {
    let domain = ball();
    let opts = OnlineRunOptions::default();
    let fixed = fixed_sequence()?;
    let (r, v) = online_regrets(&fixed, |t| run_online_strongly_convex(&fixed, &domain, 1.0, t, &opts))?;
    if let Some(v) = v {
        return Ok(result("9", "online strongly convex regret", false, v));
    }
    let scaled: Vec<f64> = r.iter().zip(online_budgets()).map(|(r, t)| r / (t as f64).ln()).collect();
    let (passed, ratio) = bounded_ratio(&scaled);
    let detail = format!("Reg/log T {} max/median {ratio:.3}", fmt_list(&scaled));
    Ok(result("9", "online strongly convex regret", passed, detail))
}

fn self_confident_violation(trace: &OnlineTrace) -> Option<String> {
    let bound = trace.self_confident_bound()?;
    (trace.self_confident_sum > bound * (1.0 + 1e-12)).then(|| {
        format!("self-confident sum {:.6e} above {bound:.6e}", trace.self_confident_sum)
    })
}

fn zoo() -> Result<Vec<Box<dyn Objective>>> {
    Ok(vec![
        Box::new(quadratic(10.0)?),
        Box::new(make_holder_power(center(), 0.5)?),
        Box::new(make_holder_power(center(), 0.25)?),
        Box::new(make_nonsmooth(center(), 0.0)?),
        Box::new(make_nonsmooth(center(), 1.0)?),
        Box::new(make_linear(center())),
    ])
}

fn conversion_certificates() -> Result<CriterionResult> {
    let domains = [ball(), Domain::boxed(RealVector::filled(DIM, -0.5)?, RealVector::filled(DIM, 0.75)?)?];
    let mut runs = 0;
    for obj in zoo()? {
        for domain in &domains {
            for t in [31, 256, 1001] {
                let run =
                    universal_convex_optimize(obj.as_ref(), domain, t, OracleMode::Deterministic, &UniversalOptions::default())?;
                if let Some(v) = conversion_violation(obj.as_ref(), domain, &run)? {
                    return Ok(result("10a", "conversion certificate and stabilization", false, v));
                }
                runs += 1;
            }
        }
    }
    Ok(result("10a", "conversion certificate and stabilization", true, format!("{runs} runs checked")))
}

fn guess_check_certificates() -> Result<CriterionResult> {
    let domain = ball();
    let x1 = domain.center();
    let mut runs = Vec::new();
    for kappa in [1.0, 4.0, 100.0] {
        let q = quadratic(kappa)?;
        runs.push(run_thm4(&q, &domain, 1.0, 600, &x1)?);
        runs.push(run_cor1_unknown_L(&q, &domain, 1.0, 600, &x1)?);
        runs.push(run_cor1_known_L(&q, &domain, 1.0, kappa, 600, &x1)?);
        runs.push(run_cor1_unknown_L(&q, &domain, 0.5, 600, &x1)?);
    }
    let ns = make_nonsmooth(center(), 1.0)?;
    runs.push(run_thm4(&ns, &domain, 1.0, 600, &x1)?);
    runs.push(run_cor1_unknown_L(&ns, &domain, 1.0, 600, &x1)?);
    let grid = grid_search_run(&quadratic(25.0)?, 2048, &RealVector::zeros(DIM))?;
    runs.extend(grid.instances.into_iter().filter_map(|i| i.run));
    for run in &runs {
        if let Some(v) = guess_check_violation(run) {
            return Ok(result("10b", "beta monotonicity and acceptance certificate", false, v));
        }
    }
    Ok(result("10b", "beta monotonicity and acceptance certificate", true, format!("{} runs checked", runs.len())))
}

fn self_confident_tuning() -> Result<CriterionResult> {
    let domain = ball();
    let base = SequenceParams {
        dim: DIM,
        base: Some(center()),
        drift: 0.01,
        eigenvalues: Some(linspace(1.0, 5.0)),
        objective: Some(Arc::new(make_holder_power(center(), 0.5)?)),
    };
    let families = [
        SequenceFamily::Fixed,
        SequenceFamily::DriftingLinear,
        SequenceFamily::DriftingQuadratic,
        SequenceFamily::AdversarialSwitch,
    ];
    let mut checked = 0;
    for family in families {
        for seed in 0..3 {
            let seq = make_online_sequence(family, &base, seed)?;
            let trace = run_online_convex(&seq, &domain, 2000, &OnlineRunOptions::default())?;
            if let Some(v) = self_confident_violation(&trace) {
                return Ok(result("10c", "self-confident tuning inequality", false, format!("{}: {v}", family.as_str())));
            }
            checked += 1;
        }
    }
    Ok(result("10c", "self-confident tuning inequality", true, format!("{checked} traces checked")))
}

fn projection_checks() -> Result<CriterionResult> {
    let domains = [
        ball(),
        Domain::ball(center(), 0.3)?,
        Domain::boxed(RealVector::filled(DIM, -0.5)?, RealVector::new(vec![0.5, 1.0, 2.0, 0.1, 0.0])?)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for domain in &domains {
        for _ in 0..2000 {
            let p = RealVector::new((0..DIM).map(|_| rng.random_range(-6.0..6.0)).collect())?;
            let q = domain.project(&p)?;
            if domain.project(&q)? != q || !domain.contains(&q, 1e-12)? {
                return Ok(result("10d", "projection", false, format!("projection of {p:?} not idempotent")));
            }
            // Variational inequality <p - q, y - q> <= 0 for feasible y.
            let y = domain.sample(&mut rng, 1.0);
            let vi = p.sub(&q)?.dot(&y.sub(&q)?)?;
            worst = worst.max(vi / (1.0 + p.norm()));
        }
    }
    let passed = worst <= 1e-12;
    Ok(result("10d", "projection", passed, format!("worst normalized inner product {worst:.3e}")))
}

fn smoothness_sampling() -> Result<CriterionResult> {
    let domain = ball();
    let mut parts = Vec::new();
    let mut passed = true;
    for (i, obj) in zoo()?.into_iter().enumerate() {
        let c = obj.curvature();
        let (Some(nu), Some(l)) = (c.holder_exponent, c.holder_constant) else {
            continue;
        };
        let h = verify_holder(obj.as_ref(), nu, l, &domain, 4000, i as u64)?;
        passed &= h.pass;
        for delta in [1e-3, 0.1, 1.0] {
            let r = verify_inexact_smoothness(obj.as_ref(), nu, l, delta, &domain, 2000, i as u64)?;
            passed &= r.pass;
        }
        parts.push(format!("{} nu {nu}: ratio {:.3}/{l:.3}", obj.name(), h.max_ratio));
    }
    Ok(result("10e", "Hölder and inexact smoothness sampling", passed, parts.join("; ")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_config_error() {
        assert!(matches!(run_suite("nope"), Err(Error::Config(_))));
    }

    #[test]
    fn median_and_ratio() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert_eq!(bounded_ratio(&[1.0, 1.0, 3.0]), (true, 3.0));
        assert!(!bounded_ratio(&[1.0, 1.0, 3.5]).0);
        assert!(!bounded_ratio(&[-1.0, -1.0, 0.0]).0);
    }

    #[test]
    fn holder_checks_pass() {
        let report = run_suite("holder_checks").unwrap();
        assert_eq!(report.criteria.len(), 5);
        for c in &report.criteria {
            assert!(c.passed, "{} {}: {}", c.id, c.name, c.detail);
        }
    }
}
