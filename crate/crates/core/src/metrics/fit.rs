use serde::Serialize;

use crate::error::{Error, Result};

/// Leading share of points dropped before fitting a rate.
pub const BURN_IN_FRACTION: f64 = 0.25;

const MIN_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricRate {
    /// Per-query contraction: `value ~ C exp(-rho * queries)`.
    pub rho: f64,
    pub r_squared: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 points to fit a line, got {n}")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(LinearFit { slope, intercept, r_squared, points: n })
}

fn burned(points: &[(f64, f64)]) -> Result<&[(f64, f64)]> {
    if points.len() < MIN_POINTS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_POINTS} points, got {}", points.len())));
    }
    if let Some(&(_, v)) = points.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::InvalidParameter(format!("rate fits need positive values, got {v}")));
    }
    let skip = (points.len() as f64 * BURN_IN_FRACTION).floor() as usize;
    Ok(&points[skip..])
}

/// Least-squares fit of `log(value)` against `log(T)` over `(T, value)`
/// pairs, after dropping the burn-in share.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    let pts = burned(points)?;
    if let Some(&(t, _)) = pts.iter().find(|(t, _)| !(*t > 0.0)) {
        return Err(Error::InvalidParameter(format!("log-log fits need positive abscissae, got {t}")));
    }
    let xs: Vec<f64> = pts.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    fit_line(&xs, &ys)
}

pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    Ok(loglog_fit(points)?.slope)
}

/// `rho = -slope` of `log(value)` against the query count.
pub fn geometric_rate(points: &[(f64, f64)]) -> Result<GeometricRate> {
    let pts = burned(points)?;
    let xs: Vec<f64> = pts.iter().map(|(c, _)| *c).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let fit = fit_line(&xs, &ys)?;
    Ok(GeometricRate { rho: -fit.slope, r_squared: fit.r_squared })
}
