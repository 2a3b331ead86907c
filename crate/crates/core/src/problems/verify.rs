use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{Domain, RealVector};
use crate::problems::Objective;

/// Radius used to sample the whole space when the domain is unbounded.
const UNBOUNDED_SAMPLE_RADIUS: f64 = 10.0;

#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    /// Largest observed `||grad(x) - grad(y)|| / ||x - y||^nu`.
    pub max_ratio: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InexactSmoothnessReport {
    /// `delta^((nu-1)/(1+nu)) * L_nu^(2/(1+nu))`.
    pub smoothness: f64,
    /// Smallest `rhs - lhs` observed; negative means the inequality failed.
    pub worst_slack: f64,
    pub pass: bool,
}

fn sample_pairs(
    domain: &Domain,
    n_samples: usize,
    seed: u64,
    mut visit: impl FnMut(&RealVector, &RealVector) -> Result<()>,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < n_samples {
        let x = domain.sample(&mut rng, UNBOUNDED_SAMPLE_RADIUS);
        let y = domain.sample(&mut rng, UNBOUNDED_SAMPLE_RADIUS);
        if x == y {
            continue;
        }
        visit(&x, &y)?;
        done += 1;
    }
    Ok(())
}

/// Samples pairs in `domain` and checks `||grad(x) - grad(y)|| <= L_nu ||x - y||^nu`.
pub fn verify_holder<O: Objective + ?Sized>(
    obj: &O,
    nu: f64,
    holder_constant: f64,
    domain: &Domain,
    n_samples: usize,
    seed: u64,
) -> Result<HolderReport> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::InvalidParameter(format!("Hölder exponent must lie in [0, 1], got {nu}")));
    }
    let mut max_ratio: f64 = 0.0;
    sample_pairs(domain, n_samples, seed, |x, y| {
        let dg = obj.gradient(x)?.sub(&obj.gradient(y)?)?.norm();
        let dx = x.distance(y)?;
        max_ratio = max_ratio.max(dg / dx.powf(nu));
        Ok(())
    })?;
    Ok(HolderReport { max_ratio, pass: max_ratio <= holder_constant * (1.0 + 1e-6) })
}

/// Checks the inexact-smoothness inequality
/// `||grad(x) - grad(y)||^2 <= L^2 ||x - y||^2 + 4 L delta` implied by Hölder smoothness.
pub fn verify_inexact_smoothness<O: Objective + ?Sized>(
    obj: &O,
    nu: f64,
    holder_constant: f64,
    delta: f64,
    domain: &Domain,
    n_samples: usize,
    seed: u64,
) -> Result<InexactSmoothnessReport> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let smoothness = delta.powf((nu - 1.0) / (1.0 + nu)) * holder_constant.powf(2.0 / (1.0 + nu));
    let mut worst_slack = f64::INFINITY;
    sample_pairs(domain, n_samples, seed, |x, y| {
        let dg2 = obj.gradient(x)?.sub(&obj.gradient(y)?)?.norm_sq();
        let dx2 = x.sub(y)?.norm_sq();
        let rhs = smoothness * smoothness * dx2 + 4.0 * smoothness * delta;
        worst_slack = worst_slack.min(rhs - dg2);
        Ok(())
    })?;
    let tol = 1e-9 * (1.0 + 4.0 * smoothness * delta);
    Ok(InexactSmoothnessReport { smoothness, worst_slack, pass: worst_slack >= -tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_holder_power, make_nonsmooth, make_quadratic};

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn quadratic_holder_checks() {
        let q = make_quadratic(v(&[0.0, 0.0]), v(&[1.0, 2.0])).unwrap();
        let dom = Domain::centered_ball(2, 3.0).unwrap();
        let ok = verify_holder(&q, 1.0, 2.0, &dom, 2000, 1).unwrap();
        assert!(ok.pass && ok.max_ratio <= 2.0 + 1e-12 && ok.max_ratio > 1.5);
        assert!(!verify_holder(&q, 1.0, 0.5, &dom, 2000, 1).unwrap().pass);
    }

    #[test]
    fn holder_power_half() {
        let h = make_holder_power(v(&[0.0]), 0.5).unwrap();
        let dom = Domain::centered_ball(1, 2.0).unwrap();
        let r = verify_holder(&h, 0.5, 2.0, &dom, 5000, 7).unwrap();
        assert!(r.pass);
        assert!(r.max_ratio <= 2f64.sqrt() * (1.0 + 1e-9));
    }

    #[test]
    fn inexact_smoothness_cases() {
        let dom = Domain::centered_ball(2, 2.0).unwrap();
        let q = make_quadratic(v(&[0.1, 0.2]), v(&[1.0, 3.0])).unwrap();
        let r = verify_inexact_smoothness(&q, 1.0, 3.0, 0.5, &dom, 2000, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.smoothness, 3.0);

        let h = make_holder_power(v(&[0.0, 0.0]), 0.5).unwrap();
        let r = verify_inexact_smoothness(&h, 0.5, 2.0, 0.1, &dom, 2000, 3).unwrap();
        let expected = 0.1f64.powf(-1.0 / 3.0) * 2f64.powf(4.0 / 3.0);
        assert!((r.smoothness - expected).abs() < 1e-12);
        assert!(r.pass);

        let n = make_nonsmooth(v(&[0.0, 0.0]), 0.0).unwrap();
        let l0 = n.curvature().holder_constant.unwrap();
        let r = verify_inexact_smoothness(&n, 0.0, l0, 0.3, &dom, 2000, 3).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn inexact_smoothness_needs_positive_delta() {
        let q = make_quadratic(v(&[0.0]), v(&[1.0])).unwrap();
        let dom = Domain::centered_ball(1, 1.0).unwrap();
        assert!(verify_inexact_smoothness(&q, 1.0, 1.0, 0.0, &dom, 10, 0).is_err());
    }
}
