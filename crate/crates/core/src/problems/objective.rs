use serde::Serialize;

use crate::error::Result;
use crate::math::RealVector;

/// Curvature facts known about an objective. Algorithms never read these;
/// they exist for verification and for computing suboptimality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curvature {
    /// Strong-convexity modulus `lambda >= 0`.
    pub strong_convexity: f64,
    /// Smoothness constant, `+inf` when the gradient is not Lipschitz.
    pub smoothness: f64,
    pub holder_exponent: Option<f64>,
    pub holder_constant: Option<f64>,
    pub optimum_point: Option<RealVector>,
    pub optimum_value: Option<f64>,
}

impl Curvature {
    /// `L / lambda`.
    pub fn condition_number(&self) -> f64 {
        self.smoothness / self.strong_convexity
    }
}

/// Closed-form shape of an objective, when it has one.
#[derive(Clone, Copy, Debug)]
pub enum Structure<'a> {
    /// `<coef, x>`.
    Linear { coef: &'a RealVector },
    /// `1/2 sum_i e_i (x_i - c_i)^2`.
    DiagonalQuadratic { center: &'a RealVector, eigenvalues: &'a RealVector },
    General,
}

/// A convex function with exact value and (sub)gradient access.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &RealVector) -> Result<f64>;
    fn gradient(&self, x: &RealVector) -> Result<RealVector>;
    fn curvature(&self) -> &Curvature;

    fn name(&self) -> &'static str {
        "objective"
    }

    fn structure(&self) -> Structure<'_> {
        Structure::General
    }
}

impl<O: Objective + ?Sized> Objective for &O {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &RealVector) -> Result<f64> {
        (**self).value(x)
    }
    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        (**self).gradient(x)
    }
    fn curvature(&self) -> &Curvature {
        (**self).curvature()
    }
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn structure(&self) -> Structure<'_> {
        (**self).structure()
    }
}

impl<O: Objective + ?Sized> Objective for std::sync::Arc<O> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &RealVector) -> Result<f64> {
        (**self).value(x)
    }
    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        (**self).gradient(x)
    }
    fn curvature(&self) -> &Curvature {
        (**self).curvature()
    }
    fn name(&self) -> &'static str {
        (**self).name()
    }
    fn structure(&self) -> Structure<'_> {
        (**self).structure()
    }
}
