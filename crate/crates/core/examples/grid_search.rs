//! Strongly convex optimization without knowing lambda: a dyadic grid of
//! guesses, each given an equal share of the budget.
use holderopt::problems::make_quadratic;
use holderopt::strongly_convex::{grid_count, grid_search_run, run_cor1_unknown_L};
use holderopt::{Domain, RealVector};

fn main() -> holderopt::Result<()> {
    let eig = RealVector::new(vec![1.0, 25.75, 50.5, 75.25, 100.0])?;
    let q = make_quadratic(RealVector::new(vec![1.0, -0.5, 0.5, -1.0, 0.25])?, eig)?;
    let x0 = RealVector::zeros(5);
    let budget = 4096;
    let run = grid_search_run(&q, budget, &x0)?;
    println!("lambda_hat = {:.4}, {} instances x {} queries (+{} probe)", run.lambda_hat, run.instances.len(), run.instance_budget, run.probe_queries);
    for inst in &run.instances {
        match &inst.run {
            Some(r) => println!("  i={:>2} lambda={:<10.4e} value {:.3e} rejections {}", inst.index, inst.lambda, inst.value, r.rejections),
            None => println!("  i={:>2} lambda={:<10.4e} failed: {}", inst.index, inst.lambda, inst.error.as_deref().unwrap_or("")),
        }
    }
    println!("picked instance {} with value {:.3e}", run.best_index, run.value);

    let reference = run_cor1_unknown_L(&q, &Domain::all_space(5)?, 1.0, budget / grid_count(budget), &x0)?;
    println!("same share with the true lambda: {:.3e}", reference.value);
    Ok(())
}
