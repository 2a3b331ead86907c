use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use crate::conversion::{baseline_ogd, universal_convex_optimize, weighted_regret, UniversalOptions};
use crate::error::{Error, Result};
use crate::experiment::config::{Algorithm, ExperimentConfig, ProblemFamily};
use crate::experiment::output::{format_trace_csv, write_atomic};
use crate::math::{Domain, RealVector};
use crate::metrics::{
    geometric_rate, gradient_variation, loglog_fit, minimize_diagonal_quadratic, minimize_linear, partial_regret,
    regret, RunTrace, TraceRecord,
};
use crate::online::{run_online_convex, run_online_strongly_convex, OnlineRunOptions};
use crate::problems::{
    make_holder_power, make_linear, make_nonsmooth, make_online_sequence, make_quadratic, Objective, OracleMode,
    SequenceParams, Structure,
};
use crate::strongly_convex::{grid_search_run, run_cor1_known_L, run_cor1_unknown_L, run_thm4};

/// Suboptimality below this is treated as numerically zero in rate fits.
const FIT_FLOOR: f64 = 1e-24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    /// `loglog_slope` or `geometric_rate`.
    pub kind: &'static str,
    pub value: f64,
    pub r_squared: f64,
    pub points: usize,
}

impl RateFit {
    /// Fit over trace rows: log-log slope of suboptimality (or partial regret
    /// for online runs) against queries, or the geometric per-query rate.
    pub fn from_records(records: &[TraceRecord], algorithm: Algorithm) -> Option<RateFit> {
        let metric = |r: &TraceRecord| if algorithm.is_online() { r.regret_partial } else { r.subopt };
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.accepted != Some(false))
            .filter_map(|r| metric(r).map(|v| (r.queries as f64, v)))
            .filter(|&(_, v)| v > FIT_FLOOR && v.is_finite())
            .collect();
        if algorithm.is_guess_check() {
            geometric_rate(&pts)
                .ok()
                .map(|g| RateFit { kind: "geometric_rate", value: g.rho, r_squared: g.r_squared, points: pts.len() })
        } else {
            loglog_fit(&pts)
                .ok()
                .map(|f| RateFit { kind: "loglog_slope", value: f.slope, r_squared: f.r_squared, points: f.points })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub config: BTreeMap<String, String>,
    pub algorithm: &'static str,
    pub final_subopt: Option<f64>,
    pub final_value: f64,
    pub total_queries: usize,
    pub rows: usize,
    pub fit: Option<RateFit>,
    pub wall_time_seconds: f64,
    pub details: serde_json::Value,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutcome {
    pub summary: Summary,
    /// Thinned trace, as written to the CSV.
    pub trace: RunTrace,
}

pub(crate) fn build_objective(cfg: &ExperimentConfig) -> Result<Arc<dyn Objective>> {
    let p = &cfg.problem;
    let center = RealVector::new(p.center.clone())?;
    let obj: Arc<dyn Objective> = match p.family {
        ProblemFamily::Quadratic => Arc::new(make_quadratic(center, RealVector::new(p.eigenvalues.clone())?)?),
        ProblemFamily::HolderPower => Arc::new(make_holder_power(center, p.nu.unwrap_or(1.0))?),
        ProblemFamily::Nonsmooth => Arc::new(make_nonsmooth(center, p.lambda)?),
        ProblemFamily::Linear => Arc::new(make_linear(center)),
    };
    Ok(obj)
}

/// `(argmin, min)` of the objective over the domain when it is available in
/// closed form.
pub fn constrained_optimum(obj: &dyn Objective, domain: &Domain) -> Result<Option<(RealVector, f64)>> {
    if let Some(p) = &obj.curvature().optimum_point {
        if domain.contains(p, 0.0)? {
            let v = obj.curvature().optimum_value.map_or_else(|| obj.value(p), Ok)?;
            return Ok(Some((p.clone(), v)));
        }
    }
    let point = match obj.structure() {
        Structure::DiagonalQuadratic { center, eigenvalues } => {
            Some(minimize_diagonal_quadratic(domain, center, eigenvalues)?)
        }
        Structure::Linear { coef } => minimize_linear(domain, coef)?,
        Structure::General => None,
    };
    point.map(|p| Ok((obj.value(&p)?, p))).transpose().map(|o| o.map(|(v, p)| (p, v)))
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn execute(cfg: &ExperimentConfig) -> Result<(RunTrace, serde_json::Value)> {
    let obj = build_objective(cfg).map_err(config_err)?;
    let domain = cfg.domain()?;
    let start = cfg.start()?;
    let optimum = constrained_optimum(obj.as_ref(), &domain)?;
    let opt_value = optimum.as_ref().map(|(_, v)| *v);
    let mode = cfg.oracle.mode;
    let lambda_input = || -> Result<f64> {
        let l = cfg.algorithm_lambda.unwrap_or(obj.curvature().strong_convexity);
        if l > 0.0 {
            Ok(l)
        } else {
            Err(Error::Config(format!("algorithm {}: needs algorithm.lambda > 0", cfg.algorithm.as_str())))
        }
    };

    match cfg.algorithm {
        Algorithm::OnlineConvex | Algorithm::OnlineStronglyConvex => {
            let seed = match mode {
                OracleMode::Stochastic { seed, .. } => seed,
                OracleMode::Deterministic => 0,
            };
            let params = SequenceParams {
                dim: cfg.problem.dimension,
                base: Some(RealVector::new(cfg.problem.center.clone())?),
                drift: cfg.problem.drift,
                eigenvalues: Some(RealVector::new(cfg.problem.eigenvalues.clone())?),
                objective: Some(Arc::clone(&obj)),
            };
            let seq = make_online_sequence(cfg.problem.sequence, &params, seed).map_err(config_err)?;
            let opts = OnlineRunOptions { x1: Some(start), stride: cfg.output.stride, ..Default::default() };
            let trace = if cfg.algorithm == Algorithm::OnlineConvex {
                run_online_convex(&seq, &domain, cfg.budget, &opts)?
            } else {
                let lam = cfg.algorithm_lambda.unwrap_or(seq.strong_convexity());
                if !(lam > 0.0) {
                    return Err(Error::Config("algorithm online_strongly_convex: sequence is not strongly convex".into()));
                }
                run_online_strongly_convex(&seq, &domain, lam, cfg.budget, &opts)?
            };
            let rep = regret(&seq, &trace, &domain)?;
            let point = rep
                .comparator
                .point
                .clone()
                .ok_or_else(|| Error::Config("regret is unbounded: linear losses on an unbounded domain".into()))?;
            let partials = partial_regret(&seq, &trace, &point)?;
            let vt = gradient_variation(&seq, cfg.budget, &domain)?;
            let details = json!({
                "regret": rep.regret,
                "comparator_exact": rep.comparator.exact,
                "gradient_variation": vt.value,
                "gradient_variation_exact": vt.exact,
                "self_confident_sum": trace.self_confident_sum,
                "self_confident_bound": trace.self_confident_bound(),
                "max_infeasibility": trace.max_infeasibility,
            });
            Ok((RunTrace::from_online(&trace, &partials)?, details))
        }
        Algorithm::O2bConvexUniversal | Algorithm::BaselineOgd => {
            let opts = UniversalOptions { x1: Some(start), ..Default::default() };
            let run = if cfg.algorithm == Algorithm::O2bConvexUniversal {
                universal_convex_optimize(obj.as_ref(), &domain, cfg.budget, mode, &opts)?
            } else {
                baseline_ogd(obj.as_ref(), &domain, cfg.budget, mode, &opts)?
            };
            let certificate = match &optimum {
                Some((xs, v)) => {
                    let bound = weighted_regret(&run.rounds, xs)? / run.weight_sum;
                    let gap = obj.value(&run.x_bar)? - v;
                    json!({ "gap": gap, "bound": bound, "holds": gap <= bound + 1e-9 })
                }
                None => serde_json::Value::Null,
            };
            let details = json!({
                "rounds": run.rounds.len(),
                "weight_sum": run.weight_sum,
                "max_stabilization_residual": run.max_stabilization_residual(),
                "certificate": certificate,
            });
            Ok((RunTrace::from_conversion(&run, opt_value), details))
        }
        Algorithm::Alg2Thm4 | Algorithm::Alg2Cor1KnownL | Algorithm::Alg2Cor1UnknownL => {
            let lam = lambda_input()?;
            let run = match cfg.algorithm {
                Algorithm::Alg2Thm4 => run_thm4(obj.as_ref(), &domain, lam, cfg.budget, &start)?,
                Algorithm::Alg2Cor1UnknownL => run_cor1_unknown_L(obj.as_ref(), &domain, lam, cfg.budget, &start)?,
                _ => {
                    let l = cfg.algorithm_smoothness.unwrap_or(obj.curvature().smoothness);
                    if !(l.is_finite() && l >= lam) {
                        return Err(Error::Config(format!(
                            "algorithm alg2_cor1_known_L: needs algorithm.L >= lambda, got {l}"
                        )));
                    }
                    run_cor1_known_L(obj.as_ref(), &domain, lam, l, cfg.budget, &start)?
                }
            };
            let details = json!({
                "lambda": run.lambda,
                "beta1": run.beta1,
                "beta_bar": run.beta_bar,
                "tau": run.tau,
                "rejections": run.rejections,
                "nonconvergence": run.nonconvergence,
            });
            Ok((RunTrace::from_guess_check(&run, opt_value), details))
        }
        Algorithm::Alg3GridSearch => {
            let run = grid_search_run(obj.as_ref(), cfg.budget, &start).map_err(config_err)?;
            let details = json!({
                "lambda_hat": run.lambda_hat,
                "best_index": run.best_index,
                "instances": run.instances.len(),
                "instance_budget": run.instance_budget,
                "probe_queries": run.probe_queries,
                "failed_instances": run.instances.iter().filter(|i| i.run.is_none()).count(),
            });
            Ok((RunTrace::from_grid(&run, opt_value, obj.value(&start)?), details))
        }
    }
}

/// Runs one configured experiment and writes the trace CSV and summary JSON
/// to the configured paths.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let clock = Instant::now();
    let (full, details) = execute(cfg)?;
    full.validate()?;
    let wall_time_seconds = clock.elapsed().as_secs_f64();
    let trace = full.thinned(cfg.output.stride);
    let summary = Summary {
        config: cfg.to_pairs(),
        algorithm: cfg.algorithm.as_str(),
        final_subopt: trace.final_subopt(),
        final_value: trace.final_value,
        total_queries: trace.total_queries,
        rows: trace.records.len(),
        fit: RateFit::from_records(&trace.records, cfg.algorithm),
        wall_time_seconds,
        details,
    };
    if let Some(path) = &cfg.output.trace_path {
        write_atomic(path, format_trace_csv(&trace).as_bytes())?;
    }
    if let Some(path) = &cfg.output.summary_path {
        let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
        write_atomic(path, json.as_bytes())?;
    }
    Ok(ExperimentOutcome { summary, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{parse_config_str, parse_trace_csv};

    fn cfg(extra: &str) -> ExperimentConfig {
        let budget = if extra.contains("budget=") { "" } else { "budget=16\n" };
        parse_config_str(&format!("problem.family=quadratic\nproblem.center=0.25\n{budget}{extra}")).unwrap()
    }

    #[test]
    fn every_algorithm_runs() {
        let cases = [
            "algorithm=o2b_convex_universal\n",
            "algorithm=baseline_ogd\n",
            "algorithm=online_convex\nproblem.sequence=drifting_linear\nproblem.drift=0.01\n",
            "algorithm=online_strongly_convex\nproblem.sequence=drifting_quadratic\nproblem.drift=0.1\n",
            "algorithm=alg2_thm4\n",
            "algorithm=alg2_cor1_known_L\n",
            "algorithm=alg2_cor1_unknown_L\n",
            "algorithm=alg3_grid_search\nproblem.domain.kind=all_space\nproblem.start=1\n",
        ];
        for extra in cases {
            let out = run_experiment(&cfg(extra)).unwrap_or_else(|e| panic!("{extra}: {e}"));
            assert!(out.summary.total_queries <= 16 + 2, "{extra}");
            assert!(!out.trace.records.is_empty());
        }
    }

    #[test]
    fn files_written_and_summary_matches_csv() {
        let dir = tempfile::tempdir().unwrap();
        let t = dir.path().join("t.csv");
        let s = dir.path().join("s.json");
        let c = cfg(&format!(
            "algorithm=alg2_cor1_unknown_L\nbudget=200\noutput.trace_path={}\noutput.summary_path={}\noutput.stride=3\n",
            t.display(),
            s.display()
        ));
        let out = run_experiment(&c).unwrap();
        let rows = parse_trace_csv(&std::fs::read_to_string(&t).unwrap()).unwrap();
        assert_eq!(rows, out.trace.records);
        let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&s).unwrap()).unwrap();
        assert_eq!(json["total_queries"].as_u64().unwrap() as usize, rows.last().unwrap().queries);
        assert_eq!(json["final_subopt"].as_f64(), rows.last().unwrap().subopt);
        let refit = RateFit::from_records(&rows, c.algorithm).unwrap();
        assert!((json["fit"]["value"].as_f64().unwrap() - refit.value).abs() <= 1e-12 * refit.value.abs());
    }

    #[test]
    fn optimum_outside_ball_is_found() {
        let q = make_quadratic(RealVector::new(vec![3.0, 0.0]).unwrap(), RealVector::new(vec![1.0, 2.0]).unwrap())
            .unwrap();
        let dom = Domain::centered_ball(2, 1.0).unwrap();
        let (p, v) = constrained_optimum(&q, &dom).unwrap().unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }
}
