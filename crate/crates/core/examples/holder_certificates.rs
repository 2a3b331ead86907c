//! Sampling checks of Hölder continuity and the inexact-smoothness bound on
//! the objective zoo, followed by the packaged verification suite.
use holderopt::experiment::run_suite;
use holderopt::problems::{
    make_holder_power, make_linear, make_nonsmooth, make_quadratic, verify_holder, verify_inexact_smoothness, Objective,
};
use holderopt::{Domain, RealVector};

fn main() -> holderopt::Result<()> {
    let c = RealVector::new(vec![0.3, -0.2, 0.1])?;
    let dom = Domain::centered_ball(3, 2.0)?;
    let zoo: Vec<Box<dyn Objective>> = vec![
        Box::new(make_quadratic(c.clone(), RealVector::new(vec![1.0, 2.0, 4.0])?)?),
        Box::new(make_holder_power(c.clone(), 0.5)?),
        Box::new(make_holder_power(c.clone(), 0.1)?),
        Box::new(make_nonsmooth(c.clone(), 0.0)?),
        Box::new(make_linear(c)),
    ];
    for obj in &zoo {
        let cv = obj.curvature();
        let (nu, l) = (cv.holder_exponent.unwrap(), cv.holder_constant.unwrap());
        let h = verify_holder(obj.as_ref(), nu, l, &dom, 5000, 1)?;
        print!("{:>12} nu={nu:<4} L={l:<8.4} sampled ratio {:.4}", obj.name(), h.max_ratio);
        for delta in [0.01, 1.0] {
            let r = verify_inexact_smoothness(obj.as_ref(), nu, l, delta, &dom, 2000, 2)?;
            print!("  delta={delta}: L_delta={:.3} slack {:.2e}", r.smoothness, r.worst_slack);
        }
        println!();
    }

    let report = run_suite("holder_checks")?;
    for c in &report.criteria {
        println!("{} {} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
    }
    Ok(())
}
