use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::RealVector;

/// Closed convex feasible set with a closed-form Euclidean projection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Ball { center: RealVector, radius: f64 },
    Box { lower: RealVector, upper: RealVector },
    AllSpace { dim: usize },
}

impl Domain {
    pub fn ball(center: RealVector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Domain::Ball { center, radius })
    }

    /// Ball of the given radius around the origin.
    pub fn centered_ball(dim: usize, radius: f64) -> Result<Self> {
        Self::ball(RealVector::zeros(dim), radius)
    }

    pub fn boxed(lower: RealVector, upper: RealVector) -> Result<Self> {
        lower.check_dim(&upper)?;
        if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
            return Err(Error::InvalidParameter("box requires lower <= upper componentwise".into()));
        }
        Ok(Domain::Box { lower, upper })
    }

    pub fn all_space(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        Ok(Domain::AllSpace { dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Ball { center, .. } => center.dim(),
            Domain::Box { lower, .. } => lower.dim(),
            Domain::AllSpace { dim } => *dim,
        }
    }

    /// Diameter `D`; `+inf` for the whole space.
    pub fn diameter(&self) -> f64 {
        match self {
            Domain::Ball { radius, .. } => 2.0 * radius,
            Domain::Box { lower, upper } => upper.sub(lower).map(|d| d.norm()).unwrap_or(f64::INFINITY),
            Domain::AllSpace { .. } => f64::INFINITY,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.diameter().is_finite()
    }

    /// A canonical interior point: ball center, box midpoint, or the origin.
    pub fn center(&self) -> RealVector {
        match self {
            Domain::Ball { center, .. } => center.clone(),
            Domain::Box { lower, upper } => {
                lower.zip_map(upper, |l, u| 0.5 * (l + u)).expect("box bounds share a dimension")
            }
            Domain::AllSpace { dim } => RealVector::zeros(*dim),
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, p: &RealVector) -> Result<RealVector> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        match self {
            Domain::Ball { center, radius } => {
                let offset = p.sub(center)?;
                let dist = offset.norm();
                if dist <= *radius {
                    Ok(p.clone())
                } else {
                    // rounding can leave the rescaled point a hair outside; shrink
                    // until it is inside so that projecting again is a no-op
                    let mut scale = radius / dist;
                    loop {
                        let projected = center.zip_map(&offset, |c, o| c + scale * o)?;
                        if projected.distance(center)? <= *radius {
                            return Ok(projected);
                        }
                        scale *= 1.0 - f64::EPSILON;
                    }
                }
            }
            Domain::Box { lower, upper } => {
                let clamped: Vec<f64> = p
                    .iter()
                    .zip(lower.iter().zip(upper.iter()))
                    .map(|(&x, (&l, &u))| x.clamp(l, u))
                    .collect();
                RealVector::new(clamped)
            }
            Domain::AllSpace { .. } => Ok(p.clone()),
        }
    }

    /// Distance from `p` to the set.
    pub fn distance_to(&self, p: &RealVector) -> Result<f64> {
        self.project(p)?.distance(p)
    }

    pub fn contains(&self, p: &RealVector, tol: f64) -> Result<bool> {
        Ok(self.distance_to(p)? <= tol)
    }

    /// Draws a random feasible point. Balls are sampled uniformly, boxes
    /// uniformly per coordinate; the whole space is sampled from the ball of
    /// radius `unbounded_radius` around the origin.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, unbounded_radius: f64) -> RealVector {
        match self {
            Domain::Ball { center, radius } => uniform_ball(rng, center, *radius),
            Domain::Box { lower, upper } => {
                let pts = lower
                    .iter()
                    .zip(upper.iter())
                    .map(|(&l, &u)| if u > l { rng.random_range(l..=u) } else { l })
                    .collect();
                RealVector::new(pts).expect("finite box bounds")
            }
            Domain::AllSpace { dim } => uniform_ball(rng, &RealVector::zeros(*dim), unbounded_radius),
        }
    }
}

fn uniform_ball<R: Rng + ?Sized>(rng: &mut R, center: &RealVector, radius: f64) -> RealVector {
    let d = center.dim();
    loop {
        let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let n = dir.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
        if n == 0.0 {
            continue;
        }
        let r = radius * rng.random::<f64>().powf(1.0 / d as f64);
        let pts = center.iter().zip(&dir).map(|(c, v)| c + r * v / n).collect();
        return RealVector::new(pts).expect("finite sample");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn unit_ball_projection() {
        let ball = Domain::centered_ball(2, 1.0).unwrap();
        assert_eq!(ball.project(&v(&[0.3, 0.4])).unwrap(), v(&[0.3, 0.4]));
        let p = ball.project(&v(&[3.0, 4.0])).unwrap();
        assert!((p[0] - 0.6).abs() < 1e-15 && (p[1] - 0.8).abs() < 1e-15);
        assert_eq!(ball.diameter(), 2.0);
    }

    #[test]
    fn box_projection_clamps() {
        let b = Domain::boxed(v(&[-1.0, -1.0]), v(&[1.0, 1.0])).unwrap();
        assert_eq!(b.project(&v(&[2.0, -3.0])).unwrap(), v(&[1.0, -1.0]));
        assert!((b.diameter() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn box_requires_ordered_bounds() {
        assert!(Domain::boxed(v(&[1.0]), v(&[0.0])).is_err());
    }

    #[test]
    fn all_space_is_identity_with_infinite_diameter() {
        let d = Domain::all_space(3).unwrap();
        let p = v(&[1e6, -2.0, 3.0]);
        assert_eq!(d.project(&p).unwrap(), p);
        assert!(d.diameter().is_infinite());
        assert!(!d.is_bounded());
    }

    #[test]
    fn projection_dimension_mismatch() {
        let d = Domain::centered_ball(2, 1.0).unwrap();
        assert!(matches!(d.project(&v(&[1.0])), Err(Error::DimensionMismatch { .. })));
    }
}
