//! The five distribution estimators and a common dispatch.

mod add_constant;
mod good_turing;
mod sampling_twice;

use core::fmt;
use core::str::FromStr;

pub use add_constant::{add_constant, add_constant_dp};
pub use good_turing::good_turing;
pub use sampling_twice::{protected_statistics, sampling_twice, sampling_twice_dp, ProtectedStatistics};

use crate::error::{Error, Result};
use crate::sampling::NoiseSource;
use crate::types::{EstimatorConfig, Histogram, PrivacyParams, ProbVector, SplitSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EstimatorKind {
    AddConstant,
    AddConstantDp,
    GoodTuring,
    SamplingTwice,
    SamplingTwiceDp,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 5] = [
        EstimatorKind::AddConstant,
        EstimatorKind::AddConstantDp,
        EstimatorKind::GoodTuring,
        EstimatorKind::SamplingTwice,
        EstimatorKind::SamplingTwiceDp,
    ];

    /// Short name used on the command line and in result files.
    pub fn short_name(self) -> &'static str {
        match self {
            EstimatorKind::AddConstant => "addconst",
            EstimatorKind::AddConstantDp => "addconst_dp",
            EstimatorKind::GoodTuring => "gt",
            EstimatorKind::SamplingTwice => "st",
            EstimatorKind::SamplingTwiceDp => "st_dp",
        }
    }

    pub fn is_private(self) -> bool {
        matches!(self, EstimatorKind::AddConstantDp | EstimatorKind::SamplingTwiceDp)
    }

    /// Whether the estimator consumes two independent halves.
    pub fn needs_split(self) -> bool {
        matches!(self, EstimatorKind::SamplingTwice | EstimatorKind::SamplingTwiceDp)
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.short_name() == s)
            .ok_or(Error::InvalidParameter {
                name: "estimator",
                reason: "expected one of addconst, addconst_dp, gt, st, st_dp",
            })
    }
}

/// Data handed to an estimator.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Full(Histogram),
    Split(SplitSample),
}

impl Sample {
    pub fn len(&self) -> usize {
        match self {
            Sample::Full(h) => h.len(),
            Sample::Split(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Runs `kind` on `sample`.
///
/// Single-histogram estimators given a split sample see the merged halves.
/// Sampling-twice estimators require a split sample.
pub fn estimate(
    kind: EstimatorKind,
    sample: &Sample,
    cfg: &EstimatorConfig,
    privacy: &PrivacyParams,
    rng: &mut NoiseSource,
) -> Result<ProbVector> {
    let merged;
    let full = match sample {
        Sample::Full(h) => h,
        Sample::Split(s) => {
            merged = s.x.merged(&s.x_prime)?;
            &merged
        }
    };
    match (kind, sample) {
        (EstimatorKind::AddConstant, _) => add_constant(full, cfg.add_constant),
        (EstimatorKind::AddConstantDp, _) => add_constant_dp(full, privacy, rng),
        (EstimatorKind::GoodTuring, _) => good_turing(full, cfg),
        (EstimatorKind::SamplingTwice, Sample::Split(s)) => Ok(sampling_twice(s, cfg.tau)),
        (EstimatorKind::SamplingTwiceDp, Sample::Split(s)) => Ok(sampling_twice_dp(s, privacy, cfg.tau, rng)),
        (_, Sample::Full(_)) => Err(Error::InvalidParameter {
            name: "sample",
            reason: "sampling-twice estimators need a split sample",
        }),
    }
}
