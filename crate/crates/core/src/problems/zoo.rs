use crate::error::{Error, Result};
use crate::math::RealVector;
use crate::problems::{Curvature, Objective, Structure};

/// Separable quadratic `1/2 sum_i e_i (x_i - c_i)^2`.
#[derive(Clone, Debug)]
pub struct Quadratic {
    center: RealVector,
    eigenvalues: RealVector,
    curvature: Curvature,
}

pub fn make_quadratic(center: RealVector, eigenvalues: RealVector) -> Result<Quadratic> {
    center.check_dim(&eigenvalues)?;
    if eigenvalues.iter().any(|&e| e <= 0.0) {
        return Err(Error::InvalidParameter("quadratic eigenvalues must be positive".into()));
    }
    let lambda = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let l = eigenvalues.iter().cloned().fold(0.0, f64::max);
    Ok(Quadratic {
        curvature: Curvature {
            strong_convexity: lambda,
            smoothness: l,
            holder_exponent: Some(1.0),
            holder_constant: Some(l),
            optimum_point: Some(center.clone()),
            optimum_value: Some(0.0),
        },
        center,
        eigenvalues,
    })
}

impl Quadratic {
    pub fn center(&self) -> &RealVector {
        &self.center
    }

    pub fn eigenvalues(&self) -> &RealVector {
        &self.eigenvalues
    }

    /// Same Hessian, different minimizer.
    pub fn recentered(&self, center: RealVector) -> Result<Quadratic> {
        make_quadratic(center, self.eigenvalues.clone())
    }
}

impl Objective for Quadratic {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn value(&self, x: &RealVector) -> Result<f64> {
        let diff = x.sub(&self.center)?;
        Ok(0.5 * diff.iter().zip(self.eigenvalues.iter()).map(|(d, e)| e * d * d).sum::<f64>())
    }

    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        x.sub(&self.center)?.zip_map(&self.eigenvalues, |d, e| e * d)
    }

    fn curvature(&self) -> &Curvature {
        &self.curvature
    }

    fn name(&self) -> &'static str {
        "quadratic"
    }

    fn structure(&self) -> Structure<'_> {
        Structure::DiagonalQuadratic { center: &self.center, eigenvalues: &self.eigenvalues }
    }
}

/// `||x - c||^(1+nu) / (1+nu)`, the canonical `(2^(1-nu), nu)`-Hölder smooth function.
#[derive(Clone, Debug)]
pub struct HolderPower {
    center: RealVector,
    nu: f64,
    curvature: Curvature,
}

pub fn make_holder_power(center: RealVector, nu: f64) -> Result<HolderPower> {
    if !(nu > 0.0 && nu <= 1.0) {
        return Err(Error::InvalidParameter(format!("Hölder exponent must lie in (0, 1], got {nu}")));
    }
    Ok(HolderPower {
        curvature: Curvature {
            strong_convexity: if nu == 1.0 { 1.0 } else { 0.0 },
            smoothness: if nu == 1.0 { 1.0 } else { f64::INFINITY },
            holder_exponent: Some(nu),
            holder_constant: Some(2f64.powf(1.0 - nu)),
            optimum_point: Some(center.clone()),
            optimum_value: Some(0.0),
        },
        center,
        nu,
    })
}

impl HolderPower {
    pub fn nu(&self) -> f64 {
        self.nu
    }
}

impl Objective for HolderPower {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn value(&self, x: &RealVector) -> Result<f64> {
        let r = x.distance(&self.center)?;
        Ok(r.powf(1.0 + self.nu) / (1.0 + self.nu))
    }

    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        let diff = x.sub(&self.center)?;
        let r = diff.norm();
        if r == 0.0 {
            return Ok(RealVector::zeros(self.dim()));
        }
        diff.scale(r.powf(self.nu - 1.0))
    }

    fn curvature(&self) -> &Curvature {
        &self.curvature
    }

    fn name(&self) -> &'static str {
        "holder_power"
    }
}

/// `lambda/2 ||x - c||^2 + ||x - c||_1` with subgradient selection `sign(0) = 0`.
#[derive(Clone, Debug)]
pub struct Nonsmooth {
    center: RealVector,
    lambda: f64,
    curvature: Curvature,
}

pub fn make_nonsmooth(center: RealVector, lambda: f64) -> Result<Nonsmooth> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("strong convexity must be nonnegative, got {lambda}")));
    }
    let d = center.dim() as f64;
    // with lambda > 0 the Hölder constant depends on the domain, so none is declared
    let holder_constant = (lambda == 0.0).then(|| 2.0 * d.sqrt());
    Ok(Nonsmooth {
        curvature: Curvature {
            strong_convexity: lambda,
            smoothness: f64::INFINITY,
            holder_exponent: Some(0.0),
            holder_constant,
            optimum_point: Some(center.clone()),
            optimum_value: Some(0.0),
        },
        center,
        lambda,
    })
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl Objective for Nonsmooth {
    fn dim(&self) -> usize {
        self.center.dim()
    }

    fn value(&self, x: &RealVector) -> Result<f64> {
        let diff = x.sub(&self.center)?;
        Ok(0.5 * self.lambda * diff.norm_sq() + diff.norm_l1())
    }

    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        let lambda = self.lambda;
        x.sub(&self.center)?.map(|d| lambda * d + sign(d))
    }

    fn curvature(&self) -> &Curvature {
        &self.curvature
    }

    fn name(&self) -> &'static str {
        "nonsmooth"
    }
}

/// Linear loss `<c, x>`.
#[derive(Clone, Debug)]
pub struct Linear {
    coef: RealVector,
    curvature: Curvature,
}

pub fn make_linear(coef: RealVector) -> Linear {
    Linear {
        coef,
        curvature: Curvature {
            strong_convexity: 0.0,
            smoothness: 0.0,
            holder_exponent: Some(1.0),
            holder_constant: Some(0.0),
            optimum_point: None,
            optimum_value: None,
        },
    }
}

impl Linear {
    pub fn coef(&self) -> &RealVector {
        &self.coef
    }
}

impl Objective for Linear {
    fn dim(&self) -> usize {
        self.coef.dim()
    }

    fn value(&self, x: &RealVector) -> Result<f64> {
        self.coef.dot(x)
    }

    fn gradient(&self, x: &RealVector) -> Result<RealVector> {
        self.coef.check_dim(x)?;
        Ok(self.coef.clone())
    }

    fn curvature(&self) -> &Curvature {
        &self.curvature
    }

    fn name(&self) -> &'static str {
        "linear"
    }

    fn structure(&self) -> Structure<'_> {
        Structure::Linear { coef: &self.coef }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn quadratic_examples() {
        let q = make_quadratic(v(&[0.0, 0.0]), v(&[1.0, 1.0])).unwrap();
        assert_eq!(q.value(&v(&[1.0, 1.0])).unwrap(), 1.0);
        assert_eq!(q.gradient(&v(&[1.0, 1.0])).unwrap(), v(&[1.0, 1.0]));
        assert_eq!(q.value(&v(&[0.0, 0.0])).unwrap(), 0.0);
        assert_eq!(q.gradient(&v(&[0.0, 0.0])).unwrap().norm(), 0.0);

        let ill = make_quadratic(v(&[0.0, 0.0]), v(&[1.0, 100.0])).unwrap();
        assert_eq!(ill.curvature().condition_number(), 100.0);
    }

    #[test]
    fn quadratic_rejects_nonpositive_eigenvalues() {
        assert!(make_quadratic(v(&[0.0]), v(&[0.0])).is_err());
        assert!(make_quadratic(v(&[0.0, 0.0]), v(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn holder_power_examples() {
        let smooth = make_holder_power(v(&[1.0, -1.0]), 1.0).unwrap();
        let x = v(&[2.0, 3.0]);
        assert!((smooth.value(&x).unwrap() - 0.5 * 17.0).abs() < 1e-12);
        assert_eq!(smooth.gradient(&x).unwrap(), v(&[1.0, 4.0]));

        let h = make_holder_power(v(&[0.0]), 0.5).unwrap();
        // 4^1.5 / 1.5
        assert!((h.value(&v(&[4.0])).unwrap() - 8.0 / 1.5).abs() < 1e-12);
        assert!((h.gradient(&v(&[4.0])).unwrap()[0] - 2.0).abs() < 1e-15);
        assert_eq!(h.gradient(&v(&[0.0])).unwrap(), v(&[0.0]));
        assert_eq!(h.curvature().holder_constant, Some(2f64.sqrt()));
    }

    #[test]
    fn holder_power_rejects_bad_exponent() {
        assert!(make_holder_power(v(&[0.0]), 0.0).is_err());
        assert!(make_holder_power(v(&[0.0]), 1.5).is_err());
    }

    #[test]
    fn nonsmooth_examples() {
        let f = make_nonsmooth(v(&[0.0]), 0.0).unwrap();
        assert_eq!(f.value(&v(&[-2.0])).unwrap(), 2.0);
        assert_eq!(f.gradient(&v(&[-2.0])).unwrap(), v(&[-1.0]));
        assert_eq!(f.value(&v(&[0.0])).unwrap(), 0.0);
        assert_eq!(f.gradient(&v(&[0.0])).unwrap(), v(&[0.0]));

        let g = make_nonsmooth(v(&[0.0]), 1.0).unwrap();
        assert_eq!(g.value(&v(&[3.0])).unwrap(), 7.5);
        assert_eq!(g.gradient(&v(&[3.0])).unwrap(), v(&[4.0]));
    }
}
