//! Where trial data comes from: a known distribution or an empirical corpus.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::types::{normalize, Histogram, ProbVector};

#[derive(Debug, Clone, PartialEq)]
pub enum SourceKind {
    /// Ground truth is known; trials sample from it and report KL.
    Synthetic(ProbVector),
    /// Token counts of a corpus; trials split it and report NLL.
    Empirical(Histogram),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataSource {
    pub kind: SourceKind,
    pub label: String,
}

impl DataSource {
    pub fn synthetic(p: ProbVector, label: impl Into<String>) -> Self {
        Self { kind: SourceKind::Synthetic(p), label: label.into() }
    }

    pub fn empirical(counts: Histogram, label: impl Into<String>) -> Result<Self> {
        if !(counts.total() > 0.0) {
            return Err(Error::EmptyHistogram);
        }
        Ok(Self { kind: SourceKind::Empirical(counts), label: label.into() })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            SourceKind::Synthetic(p) => p.len(),
            SourceKind::Empirical(h) => h.len(),
        }
    }
}

/// `pᵢ ∝ i^{−β}` for `i = 1..d`.
pub fn power_law(d: usize, beta: f64) -> Result<ProbVector> {
    if d == 0 {
        return Err(Error::Empty);
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter { name: "beta", reason: "must be positive and finite" });
    }
    let weights: Vec<f64> = (1..=d).map(|i| math::powf(i as f64, -beta)).collect();
    normalize(&weights)
}

/// The first `masses.len()` symbols carry `masses`, the rest are zero.
pub fn concentrated(d: usize, masses: &[f64]) -> Result<ProbVector> {
    if masses.is_empty() || masses.len() > d {
        return Err(Error::BadMass);
    }
    if masses.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
        return Err(Error::BadMass);
    }
    if (masses.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::BadMass);
    }
    let mut probs = vec![0.0; d];
    probs[..masses.len()].copy_from_slice(masses);
    ProbVector::new(probs)
}
