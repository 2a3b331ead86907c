use crate::error::{Error, Result};
use crate::math::RealVector;
use crate::problems::Objective;

/// Negative divergences above `-BREGMAN_CLAMP_TOLERANCE * scale` are rounding
/// noise and clamp to zero, where `scale = max(1, |f(x)|, |f(y)|)`.
pub const BREGMAN_CLAMP_TOLERANCE: f64 = 1e-12;

/// `D_f(x, y) = f(x) - f(y) - <grad f(y), x - y>`.
pub fn bregman_divergence<O: Objective + ?Sized>(obj: &O, x: &RealVector, y: &RealVector) -> Result<f64> {
    x.check_dim(y)?;
    let fx = obj.value(x)?;
    let fy = obj.value(y)?;
    let gy = obj.gradient(y)?;
    let d = fx - fy - gy.dot(&x.sub(y)?)?;
    if d >= 0.0 {
        return Ok(d);
    }
    let scale = 1f64.max(fx.abs()).max(fy.abs());
    if d > -BREGMAN_CLAMP_TOLERANCE * scale {
        Ok(0.0)
    } else {
        Err(Error::ConvexityViolation { value: d })
    }
}
