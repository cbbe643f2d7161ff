//! "Sampling twice" estimators.
//!
//! The first half `x` selects the set `L` of low-count symbols. The second
//! half `x′` estimates the combined mass of `L`, which is then spread over
//! `L` in proportion to truncated individual estimates. Symbols outside `L`
//! keep their own truncated estimates.

use alloc::vec::Vec;

use crate::sampling::NoiseSource;
use crate::types::{PrivacyParams, ProbVector, SplitSample};

/// Non-private estimator.
///
/// `L = {i : xᵢ ≤ τ}`, `c̃ = max{Σ_{i∈L} x′ᵢ, 1}`, `x̃ᵢ = max{x′ᵢ, 1}`. Symbols
/// in `L` get `c̃·x̃ᵢ / (N·Σ_{j∈L} x̃ⱼ)`, the others `x̃ᵢ / N`, where
/// `N = c̃ + Σ_{i∉L} x̃ᵢ`. When `L` is empty the output is `x̃` normalized.
pub fn sampling_twice(s: &SplitSample, tau: f64) -> ProbVector {
    let in_small: Vec<bool> = s.x.counts().iter().map(|&xi| xi <= tau).collect();
    let small_mass = s
        .x_prime
        .counts()
        .iter()
        .zip(&in_small)
        .filter(|(_, &small)| small)
        .map(|(v, _)| v)
        .sum::<f64>()
        .max(1.0);
    let truncated: Vec<f64> = s.x_prime.counts().iter().map(|v| v.max(1.0)).collect();
    combine(&truncated, &in_small, small_mass)
}

/// The scalars that receive Laplace noise in [`sampling_twice_dp`], before
/// noise, for a fixed small set.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtectedStatistics {
    /// `xᵢ` for every symbol (private thresholding).
    pub first_half: Vec<f64>,
    /// `Σ_{i∈L} x′ᵢ` (combined mass of the small set).
    pub small_mass: f64,
    /// `(i, x′ᵢ)` for `i ∉ L` in index order.
    pub large_counts: Vec<(usize, f64)>,
}

impl ProtectedStatistics {
    /// ℓ₁ distance between two releases over the same small set.
    pub fn l1_distance(&self, other: &ProtectedStatistics) -> f64 {
        let first: f64 = self.first_half.iter().zip(&other.first_half).map(|(a, b)| (a - b).abs()).sum();
        let large: f64 = self
            .large_counts
            .iter()
            .zip(&other.large_counts)
            .map(|((_, a), (_, b))| (a - b).abs())
            .sum();
        first + (self.small_mass - other.small_mass).abs() + large
    }
}

/// Extracts the Laplace-protected statistics of `s` for the small set
/// `in_small`. Each record lives in exactly one half and touches exactly one
/// of these scalars, so the whole release has ℓ₁-sensitivity one.
pub fn protected_statistics(s: &SplitSample, in_small: &[bool]) -> ProtectedStatistics {
    debug_assert_eq!(in_small.len(), s.len());
    let mut small_mass = 0.0;
    let mut large_counts = Vec::new();
    for (i, (&v, &small)) in s.x_prime.counts().iter().zip(in_small).enumerate() {
        if small {
            small_mass += v;
        } else {
            large_counts.push((i, v));
        }
    }
    ProtectedStatistics { first_half: s.x.counts().to_vec(), small_mass, large_counts }
}

/// ε-DP estimator.
///
/// With `ε̄ = min(ε, 1)` and floor `f = 1/ε̄`, every Laplace draw has scale
/// `1/ε`:
///
/// 1. `x̃ᵢ = xᵢ + Lap`, and `i ∈ L` iff `x̃ᵢ ≤ τ/ε̄`.
/// 2. `c̃ = max{Σ_{i∈L} x′ᵢ + Lap, f}`.
/// 3. `x̃′ᵢ = x′ᵢ + Lap` for `i ∉ L`.
/// 4. `x̄ᵢ = max{x̃ᵢ, f}` on `L`, `x̄ᵢ = (1−α)(max{x̃ᵢ, f} + max{x̃′ᵢ, f})` off it.
///
/// The output mixes `c̃` and `x̄` exactly like [`sampling_twice`]. Draws happen
/// in that order, symbols in index order.
pub fn sampling_twice_dp(s: &SplitSample, privacy: &PrivacyParams, tau: f64, rng: &mut NoiseSource) -> ProbVector {
    let scale = privacy.laplace_scale();
    let floor = privacy.floor();
    let threshold = tau / privacy.clamped_epsilon();

    let noisy_first: Vec<f64> = s.x.counts().iter().map(|xi| xi + rng.laplace(scale)).collect();
    let in_small: Vec<bool> = noisy_first.iter().map(|&v| v <= threshold).collect();
    let stats = protected_statistics(s, &in_small);

    let small_mass = (stats.small_mass + rng.laplace(scale)).max(floor);
    let mut truncated: Vec<f64> = noisy_first.iter().map(|v| v.max(floor)).collect();
    for &(i, count) in &stats.large_counts {
        let noisy_second = (count + rng.laplace(scale)).max(floor);
        truncated[i] = (1.0 - s.alpha) * (truncated[i] + noisy_second);
    }
    combine(&truncated, &in_small, small_mass)
}

fn combine(truncated: &[f64], in_small: &[bool], small_mass: f64) -> ProbVector {
    let small_total: f64 = truncated.iter().zip(in_small).filter(|(_, &s)| s).map(|(v, _)| v).sum();
    let large_total: f64 = truncated.iter().zip(in_small).filter(|(_, &s)| !s).map(|(v, _)| v).sum();

    if !in_small.iter().any(|&s| s) {
        return ProbVector::from_normalized(truncated.iter().map(|v| v / large_total).collect());
    }
    assert!(small_total > 0.0, "truncated estimates are floored above zero");

    let norm = small_mass + large_total;
    let probs = truncated
        .iter()
        .zip(in_small)
        .map(|(&v, &small)| if small { small_mass * v / (norm * small_total) } else { v / norm })
        .collect();
    ProbVector::from_normalized(probs)
}
