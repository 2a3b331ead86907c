//! Optimistic OGD with AdaGrad steps on a few loss sequences. Regret stays
//! flat when consecutive gradients agree and grows like sqrt(T) when they
//! flip every round.
use std::sync::Arc;

use holderopt::metrics::{gradient_variation, regret};
use holderopt::online::{run_online_convex, run_online_strongly_convex, OnlineRunOptions};
use holderopt::problems::{make_quadratic, OnlineSequence};
use holderopt::{Domain, RealVector};

fn main() -> holderopt::Result<()> {
    let dom = Domain::centered_ball(3, 1.0)?;
    let quad = make_quadratic(RealVector::new(vec![0.5, -0.2, 0.1])?, RealVector::new(vec![1.0, 2.0, 3.0])?)?;
    let sequences = [
        ("fixed quadratic", OnlineSequence::fixed(Arc::new(quad))),
        ("drifting linear", OnlineSequence::drifting_linear(RealVector::basis(3, 0), RealVector::new(vec![0.0, 1e-3, 0.0])?)?),
        ("adversarial switch", OnlineSequence::adversarial_switch(RealVector::basis(3, 1))),
    ];
    let opts = OnlineRunOptions::default();
    for (name, seq) in &sequences {
        println!("{name}");
        for t in [100, 1000, 10000] {
            let trace = run_online_convex(seq, &dom, t, &opts)?;
            let rep = regret(seq, &trace, &dom)?;
            let vt = gradient_variation(seq, t, &dom)?;
            println!(
                "  T={t:>5}  regret {:>9.4}  regret/sqrt(T) {:.4}  V_T {:>9.3}  self-confident {:.3} <= {:.3}",
                rep.regret,
                rep.regret / (t as f64).sqrt(),
                vt.value,
                trace.self_confident_sum,
                trace.self_confident_bound().unwrap()
            );
        }
    }

    println!("strongly convex steps on the fixed quadratic");
    let seq = &sequences[0].1;
    for t in [100, 1000, 10000] {
        let trace = run_online_strongly_convex(seq, &dom, 1.0, t, &opts)?;
        let r = regret(seq, &trace, &dom)?.regret;
        println!("  T={t:>5}  regret {r:.4}  regret/log(T) {:.4}", r / (t as f64).ln());
    }
    Ok(())
}
