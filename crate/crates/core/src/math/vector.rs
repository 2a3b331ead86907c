use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point or gradient in `R^d`. Entries are always finite.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("vector dimension must be positive".into()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("RealVector::new"));
        }
        Ok(RealVector(entries))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        RealVector(vec![0.0; dim])
    }

    pub fn filled(dim: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; dim])
    }

    /// Unit coordinate vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub(crate) fn check_dim(&self, other: &RealVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    fn finite(entries: Vec<f64>, op: &'static str) -> Result<Self> {
        if entries.iter().all(|v| v.is_finite()) {
            Ok(RealVector(entries))
        } else {
            Err(Error::NonFinite(op))
        }
    }

    /// Builds a vector componentwise from two same-length vectors.
    pub fn zip_map(&self, other: &RealVector, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_dim(other)?;
        let out = self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect();
        Self::finite(out, "zip_map")
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::finite(self.0.iter().map(|&a| f(a)).collect(), "map")
    }

    pub fn add(&self, other: &RealVector) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RealVector) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> Result<Self> {
        self.map(|v| a * v)
    }

    pub fn dot(&self, other: &RealVector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        // scaled to avoid overflow for large entries
        let m = self.norm_inf();
        if m == 0.0 {
            return 0.0;
        }
        m * self.0.iter().map(|v| (v / m) * (v / m)).sum::<f64>().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_l1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn distance(&self, other: &RealVector) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    /// `self + a * other`, computed in place.
    pub fn add_scaled(&mut self, a: f64, other: &RealVector) -> Result<()> {
        self.check_dim(other)?;
        let mut out = self.0.clone();
        for (o, b) in out.iter_mut().zip(&other.0) {
            *o += a * b;
        }
        *self = Self::finite(out, "add_scaled")?;
        Ok(())
    }
}

/// Euclidean norm.
pub fn norm(p: &RealVector) -> f64 {
    p.norm()
}

pub fn inner(p: &RealVector, q: &RealVector) -> Result<f64> {
    p.dot(q)
}

/// Returns `a * p + q`.
pub fn axpy(a: f64, p: &RealVector, q: &RealVector) -> Result<RealVector> {
    p.zip_map(q, |x, y| a * x + y)
}

impl Index<usize> for RealVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        RealVector::new(v)
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Vec<f64> {
        v.0
    }
}

impl fmt::Debug for RealVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn norm_inner_axpy_examples() {
        assert_eq!(norm(&v(&[3.0, 4.0])), 5.0);
        assert_eq!(inner(&v(&[1.0, 2.0]), &v(&[3.0, -1.0])).unwrap(), 1.0);
        assert_eq!(axpy(2.0, &v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), v(&[2.0, 1.0]));
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(RealVector::new(vec![1.0, f64::NAN]), Err(Error::NonFinite(_))));
        assert!(RealVector::new(vec![]).is_err());
        let big = v(&[f64::MAX]);
        assert!(big.scale(10.0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = inner(&v(&[1.0]), &v(&[1.0, 2.0])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 1, found: 2 });
        assert!(axpy(1.0, &v(&[1.0]), &v(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn norm_does_not_overflow() {
        let x = v(&[1e300, 1e300]);
        assert!((x.norm() / 1e300 - 2f64.sqrt()).abs() < 1e-15);
    }
}
