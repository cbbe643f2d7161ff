use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::types::{EstimatorConfig, Histogram, ProbVector};

/// Simplified Good-Turing baseline.
///
/// With `n = Σxᵢ` and `Φ_t = #{i : xᵢ = t}`, count class `t` receives mass
/// proportional to `(t+1)·(Φ_{t+1}+1)` when `t ≤ n^e` (`e` is
/// `cfg.gt_cutoff_exponent`) and to the empirical `t·Φ_t` above the cutoff.
/// Each class mass is split evenly among its `Φ_t` symbols and the vector is
/// renormalized. Counts are rounded to the nearest integer first.
pub fn good_turing(x: &Histogram, cfg: &EstimatorConfig) -> Result<ProbVector> {
    let counts: Vec<u64> = x.counts().iter().map(|&c| math::round(c) as u64).collect();
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::EmptyHistogram);
    }
    let cutoff = math::powf(n as f64, cfg.gt_cutoff_exponent);

    let mut profile: BTreeMap<u64, u64> = BTreeMap::new();
    for &t in &counts {
        *profile.entry(t).or_default() += 1;
    }
    let phi = |t: u64| profile.get(&t).copied().unwrap_or(0) as f64;

    // Per-symbol weight of each occupied count class.
    let per_symbol: BTreeMap<u64, f64> = profile
        .iter()
        .map(|(&t, &members)| {
            let class_mass = if t as f64 <= cutoff {
                (t as f64 + 1.0) * (phi(t + 1) + 1.0)
            } else {
                t as f64 * members as f64
            };
            (t, class_mass / members as f64)
        })
        .collect();

    let weights: Vec<f64> = counts.iter().map(|t| per_symbol[t]).collect();
    let total: f64 = weights.iter().sum();
    Ok(ProbVector::from_normalized(weights.into_iter().map(|w| w / total).collect()))
}
