use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sampling::NoiseSource;
use crate::types::{Histogram, PrivacyParams, ProbVector};

/// `(xᵢ + c) / (Σⱼ xⱼ + c·d)`. `c = 1` is Laplace smoothing, `c = 1/2` is
/// Krichevsky–Trofimov.
pub fn add_constant(x: &Histogram, c: f64) -> Result<ProbVector> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter { name: "add_constant", reason: "must be positive and finite" });
    }
    if x.is_empty() {
        return Err(Error::Empty);
    }
    let denom = x.total() + c * x.len() as f64;
    Ok(ProbVector::from_normalized(x.counts().iter().map(|xi| (xi + c) / denom).collect()))
}

/// Laplace mechanism on the count vector followed by truncation at
/// `1/min(ε, 1)` and normalization.
///
/// Adding or removing one record moves one count by one, so the count vector
/// has ℓ₁-sensitivity 1 and the release is ε-DP.
pub fn add_constant_dp(x: &Histogram, privacy: &PrivacyParams, rng: &mut NoiseSource) -> Result<ProbVector> {
    if x.is_empty() {
        return Err(Error::Empty);
    }
    let floor = privacy.floor();
    let scale = privacy.laplace_scale();
    let noisy: Vec<f64> = x.counts().iter().map(|xi| (xi + rng.laplace(scale)).max(floor)).collect();
    let total: f64 = noisy.iter().sum();
    Ok(ProbVector::from_normalized(noisy.into_iter().map(|v| v / total).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: &[f64]) -> Histogram {
        Histogram::new(v.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn add_constant_examples() {
        close(add_constant(&h(&[2.0, 0.0]), 1.0).unwrap().probs(), &[0.75, 0.25]);
        close(add_constant(&h(&[0.0, 0.0]), 1.0).unwrap().probs(), &[0.5, 0.5]);
        close(add_constant(&h(&[0.0, 0.0, 0.0]), 0.5).unwrap().probs(), &[1.0 / 3.0; 3]);
        assert!(add_constant(&h(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn add_constant_dp_zero_noise_examples() {
        let mut rng = NoiseSource::zero_noise();
        let eps1 = PrivacyParams::pure(1.0).unwrap();
        close(add_constant_dp(&h(&[3.0, 1.0]), &eps1, &mut rng).unwrap().probs(), &[0.75, 0.25]);
        close(add_constant_dp(&h(&[0.0, 0.0]), &eps1, &mut rng).unwrap().probs(), &[0.5, 0.5]);
        let eps_half = PrivacyParams::pure(0.5).unwrap();
        close(
            add_constant_dp(&h(&[0.0, 4.0]), &eps_half, &mut rng).unwrap().probs(),
            &[1.0 / 3.0, 2.0 / 3.0],
        );
    }

    #[test]
    fn add_constant_dp_is_positive_under_noise() {
        let mut rng = NoiseSource::random(8);
        let eps = PrivacyParams::pure(0.1).unwrap();
        for _ in 0..100 {
            let q = add_constant_dp(&h(&[0.0; 20]), &eps, &mut rng).unwrap();
            assert!(q.probs().iter().all(|&v| v > 0.0));
        }
    }
}
