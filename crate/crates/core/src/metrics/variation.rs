use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::math::{Domain, RealVector};
use crate::problems::OnlineSequence;

pub const MONTE_CARLO_SAMPLES: usize = 10_000;
const MONTE_CARLO_SEED: u64 = 0x5eed;
/// Sampling radius used when the domain is unbounded.
const UNBOUNDED_RADIUS: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Variation {
    pub value: f64,
    /// `false` for Monte-Carlo estimates.
    pub exact: bool,
}

/// Squared sup-norm gradient changes `sup_x ||grad f_t(x) - grad f_{t-1}(x)||^2`
/// for `t = 2..=T`, exact when the change does not depend on `x`.
fn exact_terms(seq: &OnlineSequence, horizon: usize) -> Option<Vec<f64>> {
    (2..=horizon).map(|t| seq.gradient_shift(t).map(|s| s.norm_sq())).collect()
}

fn sampled_terms(seq: &OnlineSequence, horizon: usize, domain: &Domain, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<RealVector> = (0..samples.max(1)).map(|_| domain.sample(&mut rng, UNBOUNDED_RADIUS)).collect();
    let mut prev = seq.at(1);
    let mut terms = Vec::with_capacity(horizon.saturating_sub(1));
    for t in 2..=horizon {
        let cur = seq.at(t);
        let mut sup = 0.0f64;
        for x in &points {
            sup = sup.max(cur.gradient(x)?.sub(&prev.gradient(x)?)?.norm_sq());
        }
        terms.push(sup);
        prev = cur;
    }
    Ok(terms)
}

fn terms(seq: &OnlineSequence, horizon: usize, domain: &Domain) -> Result<(Vec<f64>, bool)> {
    match exact_terms(seq, horizon) {
        Some(t) => Ok((t, true)),
        None => Ok((sampled_terms(seq, horizon, domain, MONTE_CARLO_SAMPLES, MONTE_CARLO_SEED)?, false)),
    }
}

/// `V_T = sum_{t=2}^T sup_x ||grad f_t(x) - grad f_{t-1}(x)||^2`.
pub fn gradient_variation(seq: &OnlineSequence, horizon: usize, domain: &Domain) -> Result<Variation> {
    let (t, exact) = terms(seq, horizon, domain)?;
    Ok(Variation { value: t.iter().sum(), exact })
}

/// Monte-Carlo estimate of `V_T` over `samples` domain points.
pub fn gradient_variation_monte_carlo(
    seq: &OnlineSequence,
    horizon: usize,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<Variation> {
    Ok(Variation { value: sampled_terms(seq, horizon, domain, samples, seed)?.iter().sum(), exact: false })
}

/// Largest single term of `V_T`.
pub fn ghat_max(seq: &OnlineSequence, horizon: usize, domain: &Domain) -> Result<Variation> {
    let (t, exact) = terms(seq, horizon, domain)?;
    Ok(Variation { value: t.iter().cloned().fold(0.0, f64::max), exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_quadratic;
    use std::sync::Arc;

    fn v(x: &[f64]) -> RealVector {
        RealVector::new(x.to_vec()).unwrap()
    }

    #[test]
    fn fixed_family_has_no_variation() {
        let seq = OnlineSequence::fixed(Arc::new(make_quadratic(v(&[0.0]), v(&[2.0])).unwrap()));
        let dom = Domain::centered_ball(1, 1.0).unwrap();
        assert_eq!(gradient_variation(&seq, 50, &dom).unwrap(), Variation { value: 0.0, exact: true });
        assert_eq!(ghat_max(&seq, 50, &dom).unwrap().value, 0.0);
    }

    #[test]
    fn drifting_linear_sums_constant_steps() {
        let seq = OnlineSequence::drifting_linear(v(&[1.0]), v(&[0.01])).unwrap();
        let dom = Domain::centered_ball(1, 1.0).unwrap();
        let vt = gradient_variation(&seq, 3, &dom).unwrap();
        assert!((vt.value - 2e-4).abs() < 1e-15 && vt.exact);
        assert!((ghat_max(&seq, 3, &dom).unwrap().value - 1e-4).abs() < 1e-16);
    }

    #[test]
    fn switching_pair() {
        let seq = OnlineSequence::adversarial_switch(v(&[1.0]));
        let dom = Domain::centered_ball(1, 1.0).unwrap();
        for t in [2, 5, 10] {
            assert_eq!(gradient_variation(&seq, t, &dom).unwrap().value, 4.0 * (t - 1) as f64);
        }
        assert_eq!(ghat_max(&seq, 10, &dom).unwrap().value, 4.0);
    }

    #[test]
    fn monte_carlo_matches_exact_for_linear() {
        let seq = OnlineSequence::drifting_linear(v(&[0.5, -1.0]), v(&[0.03, 0.04])).unwrap();
        let dom = Domain::centered_ball(2, 1.0).unwrap();
        let exact = gradient_variation(&seq, 6, &dom).unwrap().value;
        let mc = gradient_variation_monte_carlo(&seq, 6, &dom, MONTE_CARLO_SAMPLES, 1).unwrap().value;
        assert!((exact - mc).abs() < 1e-12, "{exact} vs {mc}");
    }
}
