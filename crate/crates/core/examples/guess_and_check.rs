//! Guess-and-check for strongly convex problems: the weight ratio beta is
//! halved until the observed smoothness allows it.
use holderopt::metrics::geometric_rate;
use holderopt::problems::{make_nonsmooth, make_quadratic};
use holderopt::strongly_convex::{run_cor1_known_L, run_cor1_unknown_L, run_thm4, thm4_threshold, GuessCheckRun};
use holderopt::{Domain, RealVector};

fn describe(label: &str, run: &GuessCheckRun) {
    let pts: Vec<(f64, f64)> =
        run.value_by_query().into_iter().map(|(c, v)| (c as f64, v)).filter(|p| p.1 > 1e-24).collect();
    let rho = geometric_rate(&pts).map(|g| format!("{:.4}", g.rho)).unwrap_or_else(|_| "n/a".into());
    println!(
        "{label:<28} final {:.3e}  rho {rho}  accepted {}  rejected {}  beta {:?}",
        run.value,
        run.tau - 1,
        run.rejections,
        run.betas.last()
    );
}

fn main() -> holderopt::Result<()> {
    let c = RealVector::new(vec![1.0, -0.5, 0.5, -1.0, 0.25])?;
    let dom = Domain::centered_ball(5, 2.0)?;
    let x1 = dom.center();
    for kappa in [4.0f64, 25.0, 100.0] {
        let eig: Vec<f64> = (0..5).map(|i| 1.0 + (kappa - 1.0) * i as f64 / 4.0).collect();
        let q = make_quadratic(c.clone(), RealVector::new(eig)?)?;
        println!("kappa = {kappa}  (reference rate 1/(6 sqrt(kappa)) = {:.4})", 1.0 / (6.0 * kappa.sqrt()));
        describe("  threshold rule", &run_thm4(&q, &dom, 1.0, 1000, &x1)?);
        describe("  known L", &run_cor1_known_L(&q, &dom, 1.0, kappa, 1000, &x1)?);
        describe("  unknown L", &run_cor1_unknown_L(&q, &dom, 1.0, 1000, &x1)?);
    }

    // Without smoothness the threshold keeps beta from collapsing.
    let ns = make_nonsmooth(c, 1.0)?;
    for t in [128, 512, 2048] {
        let run = run_thm4(&ns, &dom, 1.0, t, &x1)?;
        println!("nonsmooth T={t:>4} threshold {:.5} gap {:.3e} gap*T/log T {:.4}", thm4_threshold(t), run.value, run.value * t as f64 / (t as f64).ln());
    }
    Ok(())
}
