//! The universal convex method on objectives of different smoothness. The
//! same code, with no smoothness input, speeds up on the quadratic.
use holderopt::conversion::{baseline_ogd, universal_convex_optimize, weighted_regret, UniversalOptions};
use holderopt::metrics::loglog_slope;
use holderopt::problems::{make_holder_power, make_nonsmooth, make_quadratic, Objective, OracleMode};
use holderopt::{Domain, RealVector};

fn main() -> holderopt::Result<()> {
    let c = RealVector::new(vec![1.0, -0.5, 0.5, -1.0, 0.25])?;
    let dom = Domain::centered_ball(5, 2.0)?;
    let objs: Vec<Box<dyn Objective>> = vec![
        Box::new(make_quadratic(c.clone(), RealVector::new(vec![1.0, 3.25, 5.5, 7.75, 10.0])?)?),
        Box::new(make_holder_power(c.clone(), 0.5)?),
        Box::new(make_nonsmooth(c.clone(), 0.0)?),
    ];
    let opts = UniversalOptions::default();
    for obj in &objs {
        let opt = obj.curvature().optimum_value.unwrap();
        let xs = obj.curvature().optimum_point.clone().unwrap();
        let mut finals = Vec::new();
        for k in 5..=10 {
            let t = 1usize << k;
            let run = universal_convex_optimize(obj.as_ref(), &dom, t, OracleMode::Deterministic, &opts)?;
            let gap = obj.value(&run.x_bar)? - opt;
            let bound = weighted_regret(&run.rounds, &xs)? / run.weight_sum;
            let plain = baseline_ogd(obj.as_ref(), &dom, t, OracleMode::Deterministic, &opts)?;
            println!(
                "{:>12} T={t:>4} gap {gap:.3e} (certificate {bound:.3e}, plain averaging {:.3e})",
                obj.name(),
                obj.value(&plain.x_bar)? - opt
            );
            finals.push((run.queries as f64, gap));
        }
        let pos: Vec<_> = finals.into_iter().filter(|p| p.1 > 0.0).collect();
        println!("{:>12} log-log slope {:.3}", obj.name(), loglog_slope(&pos)?);
    }

    // Noisy gradients: the 1/sqrt(T) term takes over.
    let q = &objs[0];
    for t in [256, 1024, 4096] {
        let mean: f64 = (0..10)
            .map(|seed| {
                let mode = OracleMode::Stochastic { sigma: 1.0, seed };
                let run = universal_convex_optimize(q.as_ref(), &dom, t, mode, &opts).unwrap();
                q.value(&run.x_bar).unwrap()
            })
            .sum::<f64>()
            / 10.0;
        println!("stochastic sigma=1 T={t:>4} mean gap {mean:.3e}");
    }
    Ok(())
}
