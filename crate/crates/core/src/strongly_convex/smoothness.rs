use serde::Serialize;

use crate::error::{Error, Result};
use crate::math::{RealVector, BREGMAN_CLAMP_TOLERANCE};
use crate::problems::Objective;

/// Divergences at or below this (times `max(1, |l(a)|, |l(b)|)`) count as
/// zero, and the smoothness check passes unconditionally.
pub const DEGENERATE_DIVERGENCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum EmpiricalSmoothness {
    Value(f64),
    /// The two points are (numerically) indistinguishable to `l`.
    AcceptSentinel,
}

impl EmpiricalSmoothness {
    /// `L` as a number, with the sentinel read as 0.
    pub fn as_f64(self) -> f64 {
        match self {
            EmpiricalSmoothness::Value(l) => l,
            EmpiricalSmoothness::AcceptSentinel => 0.0,
        }
    }

    pub fn is_sentinel(self) -> bool {
        matches!(self, EmpiricalSmoothness::AcceptSentinel)
    }
}

/// `||grad l(a) - grad l(b)||^2 / (2 D_l(a, b))`.
pub fn empirical_smoothness<O: Objective + ?Sized>(obj: &O, a: &RealVector, b: &RealVector) -> Result<EmpiricalSmoothness> {
    let ga = obj.gradient(a)?;
    let gb = obj.gradient(b)?;
    empirical_smoothness_with(obj, a, &ga, b, &gb)
}

/// Same as [`empirical_smoothness`] with the gradients already at hand.
pub fn empirical_smoothness_with<O: Objective + ?Sized>(
    obj: &O,
    a: &RealVector,
    grad_a: &RealVector,
    b: &RealVector,
    grad_b: &RealVector,
) -> Result<EmpiricalSmoothness> {
    let fa = obj.value(a)?;
    let fb = obj.value(b)?;
    let d = fa - fb - grad_b.dot(&a.sub(b)?)?;
    let scale = 1f64.max(fa.abs()).max(fb.abs());
    if d < -BREGMAN_CLAMP_TOLERANCE * scale {
        return Err(Error::ConvexityViolation { value: d });
    }
    if d <= DEGENERATE_DIVERGENCE * scale {
        return Ok(EmpiricalSmoothness::AcceptSentinel);
    }
    let l = grad_a.sub(grad_b)?.norm_sq() / (2.0 * d);
    if !l.is_finite() {
        return Err(Error::NonFinite("empirical smoothness"));
    }
    Ok(EmpiricalSmoothness::Value(l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_quadratic;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn half_square_is_exactly_one() {
        let q = make_quadratic(v(&[0.0]), v(&[1.0])).unwrap();
        for (a, b) in [(0.5, -1.0), (3.0, 2.0), (-7.25, 0.125)] {
            let l = empirical_smoothness(&q, &v(&[a]), &v(&[b])).unwrap();
            assert!((l.as_f64() - 1.0).abs() < 1e-12, "{l:?}");
        }
    }

    #[test]
    fn identical_points_give_sentinel() {
        let q = make_quadratic(v(&[0.0, 1.0]), v(&[1.0, 2.0])).unwrap();
        let p = v(&[0.3, 0.4]);
        assert_eq!(empirical_smoothness(&q, &p, &p).unwrap(), EmpiricalSmoothness::AcceptSentinel);
    }

    #[test]
    fn quadratic_ratio_is_sandwiched() {
        let q = make_quadratic(v(&[0.1, -0.2]), v(&[1.0, 4.0])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let a = v(&[rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]);
            let b = v(&[rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]);
            if let EmpiricalSmoothness::Value(l) = empirical_smoothness(&q, &a, &b).unwrap() {
                assert!((1.0 - 1e-9..=4.0 + 1e-9).contains(&l), "{l}");
            }
        }
    }
}
