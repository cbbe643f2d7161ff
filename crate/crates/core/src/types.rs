//! Domain types shared by every module.
//!
//! All types are immutable value objects. Counts are stored as `f64` so that
//! noisy intermediates (a count plus Laplace noise) go through the same code
//! paths as raw counts.

use alloc::vec::Vec;
use core::ops::Index;

use crate::error::{Error, Result};
use crate::estimators::EstimatorKind;
use crate::math;

/// Absolute tolerance on `|Σp − 1|` accepted by [`validate_prob_vector`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A probability vector over `d ≥ 1` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    /// Validates `raw` as a distribution. See [`validate_prob_vector`].
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        check_entries(&raw)?;
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self(raw))
    }

    /// Uniform distribution over `d` symbols.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        Ok(Self(alloc::vec![1.0 / d as f64; d]))
    }

    /// Callers guarantee nonnegative entries with unit sum.
    pub(crate) fn from_normalized(probs: Vec<f64>) -> Self {
        debug_assert!(check_entries(&probs).is_ok());
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOLERANCE);
        Self(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false for a constructed vector; present for clippy's sake.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Checks nonnegativity, finiteness and normalization of `raw`.
pub fn validate_prob_vector(raw: &[f64]) -> Result<ProbVector> {
    ProbVector::new(raw.to_vec())
}

/// Divides every entry by the total.
pub fn normalize(raw: &[f64]) -> Result<ProbVector> {
    check_entries(raw)?;
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 {
        return Err(Error::ZeroSum);
    }
    Ok(ProbVector(raw.iter().map(|v| v / sum).collect()))
}

fn check_entries(raw: &[f64]) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in raw.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index });
        }
        if value < 0.0 {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    Ok(())
}

/// Symbol occurrence counts, one entry per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram(Vec<f64>);

impl Histogram {
    pub fn new(counts: Vec<f64>) -> Result<Self> {
        for (index, &value) in counts.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeEntry { index, value });
            }
        }
        Ok(Self(counts))
    }

    pub fn zeros(d: usize) -> Self {
        Self(alloc::vec![0.0; d])
    }

    pub(crate) fn from_counts_unchecked(counts: Vec<f64>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Entrywise sum of two equal-length histograms.
    pub fn merged(&self, other: &Histogram) -> Result<Histogram> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { left: self.len(), right: other.len() });
        }
        Ok(Histogram(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }
}

impl Index<usize> for Histogram {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Two independently sampled halves `x ~ Poi(α·n·p)` and `x′ ~ Poi((1−α)·n·p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSample {
    pub x: Histogram,
    pub x_prime: Histogram,
    pub alpha: f64,
    pub n: f64,
}

impl SplitSample {
    pub fn new(x: Histogram, x_prime: Histogram, alpha: f64, n: f64) -> Result<Self> {
        if x.len() != x_prime.len() {
            return Err(Error::DimensionMismatch { left: x.len(), right: x_prime.len() });
        }
        check_alpha(alpha)?;
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidParameter { name: "n", reason: "must be positive and finite" });
        }
        Ok(Self { x, x_prime, alpha, n })
    }

    /// Builds a split from explicit halves; `n` is taken as the combined total
    /// (or 1 when both halves are empty).
    pub fn from_halves(x: Histogram, x_prime: Histogram, alpha: f64) -> Result<Self> {
        let n = (x.total() + x_prime.total()).max(1.0);
        Self::new(x, x_prime, alpha, n)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "alpha", reason: "must lie strictly inside (0, 1)" })
    }
}

/// Privacy budget. Every mechanism in this crate is pure ε-DP, so `delta`
/// is carried for reporting and for the `δ ≤ ε` lower-bound condition only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter { name: "epsilon", reason: "must be positive and finite" });
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParameter { name: "delta", reason: "must lie in [0, 1]" });
        }
        Ok(Self { epsilon, delta })
    }

    pub fn pure(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 0.0)
    }

    /// `min(ε, 1)`.
    pub fn clamped_epsilon(&self) -> f64 {
        self.epsilon.min(1.0)
    }

    /// Truncation floor `1 / min(ε, 1)` used by the private estimators.
    pub fn floor(&self) -> f64 {
        1.0 / self.clamped_epsilon()
    }

    /// Scale of every Laplace draw: `1/ε`.
    pub fn laplace_scale(&self) -> f64 {
        1.0 / self.epsilon
    }
}

/// Estimator hyperparameters.
///
/// `tau` is an absolute threshold in count units. The private sampling-twice
/// estimator compares noisy counts against `tau / min(ε, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    pub alpha: f64,
    pub tau: f64,
    pub add_constant: f64,
    pub gt_cutoff_exponent: f64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { alpha: 0.5, tau: 0.0, add_constant: 1.0, gt_cutoff_exponent: 1.0 / 3.0 }
    }
}

impl EstimatorConfig {
    pub fn new(alpha: f64, tau: f64, add_constant: f64, gt_cutoff_exponent: f64) -> Result<Self> {
        let cfg = Self { alpha, tau, add_constant, gt_cutoff_exponent };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter { name: "tau", reason: "must be nonnegative and finite" });
        }
        if !(self.add_constant > 0.0 && self.add_constant.is_finite()) {
            return Err(Error::InvalidParameter { name: "add_constant", reason: "must be positive and finite" });
        }
        if !(self.gt_cutoff_exponent > 0.0 && self.gt_cutoff_exponent < 1.0) {
            return Err(Error::InvalidParameter {
                name: "gt_cutoff_exponent",
                reason: "must lie strictly inside (0, 1)",
            });
        }
        Ok(())
    }

    /// Tuned experiment defaults: `τ = 0, α = 0.5` for the non-private
    /// sampling-twice estimator and `τ = min(1/ε, 1)·ln d, α = 0.9` for the
    /// private one. Other estimators get [`EstimatorConfig::default`].
    pub fn tuned(kind: EstimatorKind, d: usize, privacy: &PrivacyParams) -> Self {
        let base = Self::default();
        match kind {
            EstimatorKind::SamplingTwice => Self { alpha: 0.5, tau: 0.0, ..base },
            EstimatorKind::SamplingTwiceDp => Self {
                alpha: 0.9,
                tau: (1.0 / privacy.epsilon).min(1.0) * ln_d(d),
                ..base
            },
            _ => base,
        }
    }

    /// Sets `tau = multiplier · ln d`.
    pub fn with_tau_multiplier(mut self, multiplier: f64, d: usize) -> Self {
        self.tau = multiplier * ln_d(d);
        self
    }
}

/// Threshold used by the private sampling-twice estimator when none is tuned:
/// `4·ln d`.
pub fn default_dp_threshold(d: usize) -> f64 {
    4.0 * ln_d(d)
}

pub(crate) fn ln_d(d: usize) -> f64 {
    math::ln(d as f64)
}
