//! Cross-checks against independent reference computations: plain-array
//! reimplementations of the optimizers, brute-force projections and
//! comparators, and hand-evaluated closed forms.

use std::sync::Arc;

use approx::assert_relative_eq;
use holderopt::conversion::{universal_convex_optimize, UniversalOptions};
use holderopt::math::bregman_divergence;
use holderopt::metrics::{best_comparator, geometric_rate, gradient_variation, loglog_slope, regret};
use holderopt::online::{run_online_convex, OnlineRunOptions, OptimisticOgd, StepSchedule};
use holderopt::problems::{
    make_holder_power, make_linear, make_nonsmooth, make_quadratic, Curvature, GradientOracle, Objective,
    OnlineSequence, OracleMode,
};
use holderopt::strongly_convex::{
    empirical_smoothness, grid_count, grid_search_run, guess_check_run, run_cor1_known_L, run_cor1_unknown_L,
    thm4_threshold, EmpiricalSmoothness,
};
use holderopt::{Domain, RealVector, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(x: &[f64]) -> RealVector {
    RealVector::new(x.to_vec()).unwrap()
}

/// `1/2 sum e_i (x_i - c_i)^2` on plain arrays.
fn quad_grad(e: &[f64], c: &[f64], x: &[f64]) -> Vec<f64> {
    x.iter().zip(c).zip(e).map(|((x, c), e)| e * (x - c)).collect()
}

fn project_ball(x: &[f64], r: f64) -> Vec<f64> {
    let n = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if n <= r {
        x.to_vec()
    } else {
        x.iter().map(|a| a * r / n).collect()
    }
}

#[test]
fn universal_optimizer_matches_reference() {
    let (e, c, r) = ([1.0, 4.0, 9.0], [0.7, -1.5, 0.4], 1.0);
    let q = make_quadratic(v(&c), v(&e)).unwrap();
    let dom = Domain::centered_ball(3, r).unwrap();
    let budget = 301;
    let run = universal_convex_optimize(&q, &dom, budget, OracleMode::Deterministic, &UniversalOptions::default())
        .unwrap();

    let d = 2.0 * r;
    let (mut acc, mut w) = (0.0f64, 0.0f64);
    let mut s = vec![0.0; 3];
    let mut x_hat = vec![0.0; 3];
    let mut prev_x: Option<Vec<f64>> = None;
    let rounds = (budget + 1) / 2;
    assert_eq!(run.rounds.len(), rounds);
    for t in 1..=rounds {
        let a = t as f64;
        let m: Vec<f64> = match &prev_x {
            None => vec![0.0; 3],
            Some(px) => {
                let probe: Vec<f64> = (0..3).map(|i| (s[i] + a * px[i]) / (w + a)).collect();
                quad_grad(&e, &c, &probe).iter().map(|g| a * g).collect()
            }
        };
        let eta = d / (2.0 * (1e-12 + acc).sqrt());
        let x = project_ball(&(0..3).map(|i| x_hat[i] - eta * m[i]).collect::<Vec<_>>(), r);
        for i in 0..3 {
            s[i] += a * x[i];
        }
        w += a;
        let x_bar: Vec<f64> = s.iter().map(|si| si / w).collect();
        let g: Vec<f64> = quad_grad(&e, &c, &x_bar).iter().map(|gi| a * gi).collect();
        x_hat = project_ball(&(0..3).map(|i| x_hat[i] - eta * g[i]).collect::<Vec<_>>(), r);
        acc += (0..3).map(|i| (g[i] - m[i]).powi(2)).sum::<f64>();

        let got = &run.rounds[t - 1];
        assert_relative_eq!(got.eta.unwrap(), eta, max_relative = 1e-9);
        for i in 0..3 {
            assert!((got.x_bar.as_slice()[i] - x_bar[i]).abs() < 1e-9, "round {t}");
        }
        prev_x = Some(x);
    }
    assert_eq!(run.queries, budget);
}

#[test]
fn guess_check_matches_reference() {
    // All-space 2-D quadratic, literal weighted-average form of the update.
    let (e, c) = ([1.0, 16.0], [1.0, -2.0]);
    let q = make_quadratic(v(&c), v(&e)).unwrap();
    let dom = Domain::all_space(2).unwrap();
    let lambda = 1.0;
    let budget = 80;
    let run = guess_check_run(&q, &dom, lambda, 1.0, 0.0, budget, &v(&[0.0, 0.0])).unwrap();

    let val = |x: &[f64]| 0.5 * (0..2).map(|i| e[i] * (x[i] - c[i]).powi(2)).sum::<f64>();
    let mut x = vec![0.0, 0.0];
    let mut x_bar = x.clone();
    let mut gb = quad_grad(&e, &c, &x_bar);
    let (mut alpha, mut w) = (1.0f64, 1.0f64);
    let mut m = vec![0.0, 0.0];
    let mut beta = 1.0f64;
    let mut queries = 1;
    let mut betas = Vec::new();
    while queries < budget {
        let g: Vec<f64> = (0..2).map(|i| alpha * gb[i] + lambda * alpha * (x[i] - x_bar[i])).collect();
        let eta = 1.0 / (lambda * w);
        while queries < budget {
            let a_next = beta * w;
            let w_next = w + a_next;
            let x_tilde: Vec<f64> = (0..2).map(|i| (w * x_bar[i] + a_next * x[i]) / w_next).collect();
            let m_next: Vec<f64> = (0..2).map(|i| a_next * gb[i] + lambda * a_next * (x[i] - x_tilde[i])).collect();
            let x_next: Vec<f64> = (0..2).map(|i| x[i] - eta * (g[i] - m[i] + m_next[i])).collect();
            let xb_next: Vec<f64> = (0..2).map(|i| (w * x_bar[i] + a_next * x_next[i]) / w_next).collect();
            let gn = quad_grad(&e, &c, &xb_next);
            queries += 1;
            let dg2: f64 = (0..2).map(|i| (gb[i] - gn[i]).powi(2)).sum();
            let breg = val(&xb_next) - val(&x_bar) - (0..2).map(|i| gb[i] * (xb_next[i] - x_bar[i])).sum::<f64>();
            let l = if breg <= 1e-14 * val(&x_bar).abs().max(1.0) { 0.0 } else { dg2 / (2.0 * breg) };
            if 4.0 * beta * beta * l <= lambda * (1.0 + 1e-9) {
                alpha = a_next;
                w = w_next;
                x = x_next;
                x_bar = xb_next;
                gb = gn;
                m = m_next;
                betas.push(beta);
                break;
            }
            beta /= 2.0;
        }
    }
    assert_eq!(run.queries, budget);
    assert_eq!(run.betas, betas);
    for i in 0..2 {
        assert!((run.x_bar.as_slice()[i] - x_bar[i]).abs() <= 1e-9 * (1.0 + x_bar[i].abs()));
    }
}

#[test]
fn hand_simulated_guess_check_on_unit_quadratic() {
    let q = make_quadratic(v(&[1.0]), v(&[1.0])).unwrap();
    let dom = Domain::all_space(1).unwrap();
    let run = guess_check_run(&q, &dom, 1.0, 1.0, 0.0, 40, &v(&[-3.0])).unwrap();
    assert_eq!(run.rejections, 1);
    assert!(run.betas.iter().all(|&b| b == 0.5));
    // Every checked step sees the exact smoothness constant.
    for s in run.steps.iter().filter_map(|s| s.smoothness) {
        if let EmpiricalSmoothness::Value(l) = s {
            assert_relative_eq!(l, 1.0, max_relative = 1e-6);
        }
    }
}

#[test]
fn threshold_short_circuit_never_rejects() {
    let q = make_quadratic(v(&[0.5, 0.5]), v(&[1.0, 100.0])).unwrap();
    let dom = Domain::all_space(2).unwrap();
    let run = guess_check_run(&q, &dom, 1.0, 0.3, 0.3, 50, &v(&[0.0, 0.0])).unwrap();
    assert_eq!(run.rejections, 0);
    assert_eq!(run.tau, 50);
    assert!(run.steps.iter().all(|s| s.smoothness.is_none()));
}

#[test]
fn known_smoothness_weight_recursion() {
    let q = make_quadratic(v(&[0.2, 0.1]), v(&[1.0, 4.0])).unwrap();
    let dom = Domain::all_space(2).unwrap();
    let run = run_cor1_known_L(&q, &dom, 1.0, 4.0, 30, &v(&[1.0, 1.0])).unwrap();
    assert!(run.betas.iter().all(|&b| b == 0.25));
    for s in &run.steps {
        // alpha_{1:t} = 1.25^(t-1)
        assert_relative_eq!(s.log2_weight_sum, (s.t - 1) as f64 * 1.25f64.log2(), max_relative = 1e-12);
    }
}

#[test]
fn wasted_queries_are_logarithmic() {
    let e: Vec<f64> = (0..5).map(|i| 1.0 + 99.0 * i as f64 / 4.0).collect();
    let q = make_quadratic(v(&[1.0, -0.5, 0.5, -1.0, 0.25]), v(&e)).unwrap();
    let dom = Domain::all_space(5).unwrap();
    let run = run_cor1_unknown_L(&q, &dom, 1.0, 600, &RealVector::zeros(5)).unwrap();
    // beta must reach sqrt(1 / (4 * 100)) = 0.05 at worst: at most ceil(log2(20)) halvings.
    assert!(run.rejections <= 5, "{}", run.rejections);
    assert!(!run.nonconvergence);
}

#[test]
fn threshold_formula() {
    assert!((thm4_threshold(100) - 0.047128548).abs() < 1e-8);
    assert_relative_eq!(thm4_threshold(100), (100f64.ln() / 100.0).exp() - 1.0, max_relative = 1e-13);
}

#[test]
fn accelerated_rates_with_fit_slack() {
    let dom = Domain::all_space(5).unwrap();
    let c = v(&[1.0, -0.5, 0.5, -1.0, 0.25]);
    let rate = |run: &holderopt::strongly_convex::GuessCheckRun| {
        let pts: Vec<(f64, f64)> =
            run.value_by_query().into_iter().map(|(q, v)| (q as f64, v)).filter(|p| p.1 > 1e-24).collect();
        geometric_rate(&pts).unwrap().rho
    };
    let e25: Vec<f64> = (0..5).map(|i| 1.0 + 24.0 * i as f64 / 4.0).collect();
    let q25 = make_quadratic(c.clone(), v(&e25)).unwrap();
    let known = run_cor1_known_L(&q25, &dom, 1.0, 25.0, 600, &RealVector::zeros(5)).unwrap();
    assert!(rate(&known) >= 0.8 / 11.0);

    let e100: Vec<f64> = (0..5).map(|i| 1.0 + 99.0 * i as f64 / 4.0).collect();
    let q100 = make_quadratic(c, v(&e100)).unwrap();
    let unknown = run_cor1_unknown_L(&q100, &dom, 1.0, 600, &RealVector::zeros(5)).unwrap();
    assert!(rate(&unknown) >= 0.8 / (1.0 + 4.0 * 200f64.sqrt()));
}

#[test]
fn grid_probe_and_instance_split() {
    assert_eq!(grid_count(1024), 20);
    assert_eq!(1024 / grid_count(1024), 51);
    let q = make_quadratic(v(&[0.0]), v(&[1.0])).unwrap();
    let run = grid_search_run(&q, 1024, &v(&[3.0])).unwrap();
    assert_eq!(run.lambda_hat, 1.0);
    assert_eq!(run.instances[0].lambda, 0.5);
    assert_eq!(run.instance_budget, 51);

    let q2 = make_quadratic(v(&[0.0, 0.0]), v(&[1.0, 16.0])).unwrap();
    let run = grid_search_run(&q2, 1024, &v(&[0.3, 0.3])).unwrap();
    assert!((1.0..=16.0).contains(&run.lambda_hat));
    assert!(run.instances.iter().any(|i| i.lambda <= 1.0 && 1.0 <= 2.0 * i.lambda));
}

#[test]
fn projection_matches_brute_force() {
    let disk = Domain::centered_ball(2, 1.0).unwrap();
    let p = disk.project(&v(&[3.0, 4.0])).unwrap();
    assert_relative_eq!(p.as_slice()[0], 0.6, max_relative = 1e-15);
    assert_relative_eq!(p.as_slice()[1], 0.8, max_relative = 1e-15);

    let boxed = Domain::boxed(v(&[-1.0, -1.0]), v(&[1.0, 1.0])).unwrap();
    assert_eq!(boxed.project(&v(&[2.0, -3.0])).unwrap(), v(&[1.0, -1.0]));

    // Grid minimization of ||x - p|| over each set.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let p = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        for dom in [&disk, &boxed] {
            let proj = dom.project(&v(&p)).unwrap();
            let mut best = f64::INFINITY;
            let n = 400;
            for i in 0..=n {
                for j in 0..=n {
                    let y = [-1.0 + 2.0 * i as f64 / n as f64, -1.0 + 2.0 * j as f64 / n as f64];
                    if !dom.contains(&v(&y), 0.0).unwrap() {
                        continue;
                    }
                    let d = (y[0] - p[0]).hypot(y[1] - p[1]);
                    best = best.min(d);
                }
            }
            let d_proj = proj.distance(&v(&p)).unwrap();
            assert!(d_proj <= best + 1e-12);
            assert!(dom.contains(&proj, 1e-12).unwrap());
        }
    }
}

struct Quartic {
    curvature: Curvature,
}

impl Objective for Quartic {
    fn dim(&self) -> usize {
        1
    }
    fn value(&self, x: &RealVector) -> Result<f64> {
        Ok(0.25 * x.as_slice()[0].powi(4))
    }
    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        RealVector::new(vec![x.as_slice()[0].powi(3)])
    }
    fn curvature(&self) -> &Curvature {
        &self.curvature
    }
}

fn quartic() -> Quartic {
    Quartic {
        curvature: Curvature {
            strong_convexity: 0.0,
            smoothness: f64::INFINITY,
            holder_exponent: None,
            holder_constant: None,
            optimum_point: Some(v(&[0.0])),
            optimum_value: Some(0.0),
        },
    }
}

#[test]
fn bregman_hand_values() {
    let half = make_quadratic(v(&[0.0]), v(&[1.0])).unwrap();
    assert_eq!(bregman_divergence(&half, &v(&[2.0]), &v(&[0.0])).unwrap(), 2.0);
    assert_eq!(bregman_divergence(&quartic(), &v(&[1.0]), &v(&[0.0])).unwrap(), 0.25);
    // 1/4 x^4 at (2, 1): 4 - 1/4 - 1 * 1 = 2.75
    assert_eq!(bregman_divergence(&quartic(), &v(&[2.0]), &v(&[1.0])).unwrap(), 2.75);
}

#[test]
fn empirical_smoothness_sandwich() {
    let half = make_quadratic(v(&[0.0]), v(&[1.0])).unwrap();
    let l = empirical_smoothness(&half, &v(&[3.0]), &v(&[-1.25])).unwrap();
    assert_relative_eq!(l.as_f64(), 1.0, max_relative = 1e-12);
    assert!(empirical_smoothness(&half, &v(&[3.0]), &v(&[3.0])).unwrap().is_sentinel());

    let q = make_quadratic(v(&[0.0, 0.0]), v(&[1.0, 4.0])).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let a = v(&[rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]);
        let b = v(&[rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]);
        if let EmpiricalSmoothness::Value(l) = empirical_smoothness(&q, &a, &b).unwrap() {
            assert!((1.0 - 1e-9..=4.0 + 1e-9).contains(&l), "{l}");
        }
    }
}

#[test]
fn zoo_hand_values() {
    let q = make_quadratic(v(&[0.0, 0.0]), v(&[1.0, 1.0])).unwrap();
    assert_eq!(q.value(&v(&[1.0, 1.0])).unwrap(), 1.0);
    assert_eq!(q.gradient(&v(&[1.0, 1.0])).unwrap(), v(&[1.0, 1.0]));

    let h = make_holder_power(v(&[0.0]), 0.5).unwrap();
    assert_relative_eq!(h.value(&v(&[4.0])).unwrap(), 4f64.powf(1.5) / 1.5, max_relative = 1e-15);
    assert_relative_eq!(h.gradient(&v(&[4.0])).unwrap().as_slice()[0], 2.0, max_relative = 1e-15);

    let n0 = make_nonsmooth(v(&[0.0]), 0.0).unwrap();
    assert_eq!(n0.value(&v(&[-2.0])).unwrap(), 2.0);
    assert_eq!(n0.gradient(&v(&[-2.0])).unwrap(), v(&[-1.0]));
    let n1 = make_nonsmooth(v(&[0.0]), 1.0).unwrap();
    assert_eq!(n1.value(&v(&[3.0])).unwrap(), 7.5);
    assert_eq!(n1.gradient(&v(&[3.0])).unwrap(), v(&[4.0]));
}

#[test]
fn stochastic_noise_has_unit_variance() {
    let q = make_quadratic(v(&[0.0; 4]), v(&[1.0; 4])).unwrap();
    let n = 100_000;
    let mut oracle = GradientOracle::new(&q, OracleMode::Stochastic { sigma: 1.0, seed: 3 }, n).unwrap();
    let x = v(&[0.5, -0.5, 1.0, 0.0]);
    let exact = q.gradient(&x).unwrap();
    let mean: f64 = (0..n).map(|_| oracle.gradient(&x).unwrap().sub(&exact).unwrap().norm_sq()).sum::<f64>() / n as f64;
    assert!((0.97..=1.03).contains(&mean), "{mean}");
}

#[test]
fn variation_closed_forms() {
    let dom = Domain::centered_ball(2, 1.0).unwrap();
    let drift = OnlineSequence::drifting_linear(v(&[0.0, 0.0]), v(&[0.01, 0.0])).unwrap();
    let vt = gradient_variation(&drift, 3, &dom).unwrap();
    assert!(vt.exact);
    assert_relative_eq!(vt.value, 2e-4, max_relative = 1e-12);

    let switch = OnlineSequence::adversarial_switch(v(&[1.0, 0.0]));
    for t in [2, 10, 101] {
        assert_relative_eq!(gradient_variation(&switch, t, &dom).unwrap().value, 4.0 * (t - 1) as f64);
    }
}

#[test]
fn comparator_beats_dense_sampling() {
    // Fixed quadratic with its minimizer outside the disk: the reported
    // comparator must be at least as good as any sampled feasible point.
    let q = make_quadratic(v(&[2.0, 1.0]), v(&[1.0, 3.0])).unwrap();
    let seq = OnlineSequence::fixed(Arc::new(q.clone()));
    let dom = Domain::centered_ball(2, 1.0).unwrap();
    let horizon = 10;
    let comp = best_comparator(&seq, horizon, &dom).unwrap();
    assert!(comp.exact);
    let n = 2000;
    let best_sampled = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            q.value(&v(&[th.cos(), th.sin()])).unwrap()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(comp.total_loss <= horizon as f64 * best_sampled + 1e-9);
    assert!(comp.total_loss >= horizon as f64 * best_sampled - 1e-4);
}

#[test]
fn one_round_linear_regret() {
    let seq = OnlineSequence::fixed(Arc::new(make_linear(v(&[1.0]))));
    let dom = Domain::boxed(v(&[-1.0]), v(&[1.0])).unwrap();
    let trace = run_online_convex(&seq, &dom, 1, &OnlineRunOptions::default()).unwrap();
    assert_eq!(regret(&seq, &trace, &dom).unwrap().regret, 1.0);
}

#[test]
fn optimistic_step_hand_values() {
    let dom = Domain::boxed(v(&[-1.0]), v(&[1.0])).unwrap();
    let mut ogd = OptimisticOgd::new(dom.clone(), v(&[0.0]), StepSchedule::constant(0.5).unwrap()).unwrap();
    assert_eq!(ogd.predict(v(&[1.0])).unwrap(), &v(&[-0.5]));
    ogd.update(&v(&[1.0])).unwrap();
    assert_eq!(ogd.x_hat(), &v(&[-0.5]));
    let mut big = OptimisticOgd::new(dom, v(&[0.0]), StepSchedule::constant(3.0).unwrap()).unwrap();
    assert_eq!(big.predict(v(&[1.0])).unwrap(), &v(&[-1.0]));

    let mut ada = StepSchedule::adagrad(1.0, 0.0).unwrap();
    ada.record(4.0);
    assert_eq!(ada.step_size(2), 0.25);
}

#[test]
fn fixed_linear_accumulator_freezes() {
    let seq = OnlineSequence::fixed(Arc::new(make_linear(v(&[0.6, -0.8]))));
    let dom = Domain::centered_ball(2, 1.0).unwrap();
    let trace = run_online_convex(&seq, &dom, 500, &OnlineRunOptions::default()).unwrap();
    assert!(trace.rounds.iter().all(|r| (r.accumulator.unwrap() - 1.0).abs() < 1e-15));
    let short = run_online_convex(&seq, &dom, 50, &OnlineRunOptions::default()).unwrap();
    let r_short = regret(&seq, &short, &dom).unwrap().regret;
    let r_long = regret(&seq, &trace, &dom).unwrap().regret;
    assert!((r_long - r_short).abs() < 1e-9 * r_short.abs().max(1.0));
}

#[test]
fn mixed_rate_fit_tracks_dominant_term() {
    let pts: Vec<(f64, f64)> =
        (8..=12).map(|k| 2f64.powi(k)).map(|t| (t, 1.0 / (t * t) + 1.0 / t.sqrt())).collect();
    let s = loglog_slope(&pts).unwrap();
    assert!((s + 0.5).abs() < 0.02, "{s}");
}
