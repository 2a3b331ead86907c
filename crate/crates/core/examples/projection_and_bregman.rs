//! Feasible sets, projections and Bregman divergences.
use holderopt::math::bregman_divergence;
use holderopt::problems::{make_holder_power, make_quadratic};
use holderopt::{Domain, RealVector};

fn main() -> holderopt::Result<()> {
    let p = RealVector::new(vec![3.0, 4.0])?;
    let disk = Domain::centered_ball(2, 1.0)?;
    let square = Domain::boxed(RealVector::filled(2, -1.0)?, RealVector::filled(2, 1.0)?)?;
    for (name, dom) in [("disk", &disk), ("square", &square), ("plane", &Domain::all_space(2)?)] {
        let q = dom.project(&p)?;
        println!("{name:>6}: project {:?} -> {:?} (distance {:.4}, diameter {})", p.as_slice(), q.as_slice(), dom.distance_to(&p)?, dom.diameter());
    }

    let x = RealVector::new(vec![1.0, -0.5])?;
    let y = RealVector::new(vec![0.2, 0.3])?;
    let quad = make_quadratic(RealVector::zeros(2), RealVector::new(vec![1.0, 4.0])?)?;
    let holder = make_holder_power(RealVector::zeros(2), 0.5)?;
    println!("D_quad(x, y)   = {:.6}", bregman_divergence(&quad, &x, &y)?);
    println!("D_holder(x, y) = {:.6}", bregman_divergence(&holder, &x, &y)?);
    Ok(())
}
