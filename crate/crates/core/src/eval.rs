//! Losses and the Monte-Carlo trial runner.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimatorKind, Sample};
use crate::math;
use crate::sampling::{self, NoiseMode, NoiseSource};
use crate::source::{DataSource, SourceKind};
use crate::types::{EstimatorConfig, Histogram, PrivacyParams, ProbVector, SplitSample};

/// `Σ_{pᵢ>0} pᵢ·ln(pᵢ/qᵢ)` in nats; `+∞` when `q` misses support of `p`.
pub fn kl_divergence(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    Ok(p.probs()
        .iter()
        .zip(q.probs())
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| if qi > 0.0 { pi * math::ln(pi / qi) } else { f64::INFINITY })
        .sum())
}

/// Shannon entropy in nats.
pub fn entropy(p: &ProbVector) -> f64 {
    -p.probs().iter().filter(|&&pi| pi > 0.0).map(|&pi| pi * math::ln(pi)).sum::<f64>()
}

/// Negative log-likelihood of the normalized holdout counts under `estimate`:
/// `−Σᵢ (x′ᵢ/‖x′‖₁)·ln(estimateᵢ)`.
pub fn nll(estimate: &ProbVector, holdout: &Histogram) -> Result<f64> {
    if estimate.len() != holdout.len() {
        return Err(Error::DimensionMismatch { left: estimate.len(), right: holdout.len() });
    }
    let total = holdout.total();
    if !(total > 0.0) {
        return Err(Error::EmptyHoldout);
    }
    Ok(holdout
        .counts()
        .iter()
        .zip(estimate.probs())
        .filter(|(&c, _)| c > 0.0)
        .map(|(&c, &q)| if q > 0.0 { -(c / total) * math::ln(q) } else { f64::INFINITY })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    Kl,
    Nll,
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LossKind::Kl => "KL",
            LossKind::Nll => "NLL",
        })
    }
}

/// How a synthetic source is turned into a dataset of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SamplingScheme {
    /// Independent `Poi(n·pᵢ)` counts.
    #[default]
    Poisson,
    /// Exactly `round(n)` draws, `Mult(n, p)`.
    Multinomial,
}

/// One cell of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialPlan {
    pub estimator: EstimatorKind,
    pub config: EstimatorConfig,
    pub privacy: PrivacyParams,
    pub n: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub loss: LossKind,
    pub scheme: SamplingScheme,
    pub noise_mode: NoiseMode,
}

impl TrialPlan {
    pub fn new(
        estimator: EstimatorKind,
        config: EstimatorConfig,
        privacy: PrivacyParams,
        n: f64,
        trials: usize,
        master_seed: u64,
        loss: LossKind,
    ) -> Self {
        Self {
            estimator,
            config,
            privacy,
            n,
            trials,
            master_seed,
            loss,
            scheme: SamplingScheme::Poisson,
            noise_mode: NoiseMode::Random,
        }
    }

    pub fn with_scheme(mut self, scheme: SamplingScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_noise_mode(mut self, mode: NoiseMode) -> Self {
        self.noise_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter { name: "trials", reason: "must be at least 1" });
        }
        if !(self.n > 0.0 && self.n.is_finite()) {
            return Err(Error::InvalidParameter { name: "n", reason: "must be positive and finite" });
        }
        if self.scheme == SamplingScheme::Multinomial && math::round(self.n) < 1.0 {
            return Err(Error::InvalidParameter { name: "n", reason: "multinomial sampling needs n ≥ 1" });
        }
        self.config.validate()
    }
}

/// Per-trial losses and their summary.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub values: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    pub trials: usize,
    pub loss_kind: LossKind,
}

impl TrialStats {
    /// Summarizes `values`. Any infinite value makes both mean and std infinite.
    pub fn from_values(values: Vec<f64>, loss_kind: LossKind) -> Self {
        let trials = values.len();
        let (mean, std) = if values.iter().any(|v| v.is_infinite()) {
            (f64::INFINITY, f64::INFINITY)
        } else if trials == 0 {
            (f64::NAN, f64::NAN)
        } else {
            let mean = values.iter().sum::<f64>() / trials as f64;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / trials as f64;
            (mean, math::sqrt(var))
        };
        Self { values, mean, std, trials, loss_kind }
    }

    /// `std / √trials`.
    pub fn standard_error(&self) -> f64 {
        self.std / math::sqrt(self.trials as f64)
    }
}

/// Runs trial `k` of `plan`. The result depends only on `(source, plan, k)`.
///
/// Synthetic sources draw a fresh dataset from the known distribution and
/// report KL. Empirical sources are split in two by binomial thinning with
/// ratio ½; the first half is thinned again to about `n` tokens for training
/// and the second half is the holdout for NLL. Sampling-twice estimators get
/// their halves by a further split with ratio `α`.
pub fn run_trial(source: &DataSource, plan: &TrialPlan, k: u64) -> Result<f64> {
    let mut rng = NoiseSource::for_trial(plan.master_seed, k, plan.noise_mode);
    let alpha = plan.config.alpha;
    match (&source.kind, plan.loss) {
        (SourceKind::Synthetic(p), LossKind::Kl) => {
            let sample = draw_synthetic(p, plan, &mut rng)?;
            let q = estimate(plan.estimator, &sample, &plan.config, &plan.privacy, &mut rng)?;
            kl_divergence(p, &q)
        }
        (SourceKind::Empirical(counts), LossKind::Nll) => {
            let (pool, holdout) = sampling::thin(counts, 0.5, &mut rng);
            let pool_total = pool.total();
            let ratio = if pool_total > 0.0 { (plan.n / pool_total).min(1.0) } else { 1.0 };
            let (training, _) = sampling::thin(&pool, ratio, &mut rng);
            let sample = if plan.estimator.needs_split() {
                let (x, x_prime) = sampling::thin(&training, alpha, &mut rng);
                Sample::Split(SplitSample::new(x, x_prime, alpha, plan.n)?)
            } else {
                Sample::Full(training)
            };
            let q = estimate(plan.estimator, &sample, &plan.config, &plan.privacy, &mut rng)?;
            nll(&q, &holdout)
        }
        (SourceKind::Synthetic(_), LossKind::Nll) => {
            Err(Error::IncompatibleLoss("NLL needs an empirical source with a holdout split"))
        }
        (SourceKind::Empirical(_), LossKind::Kl) => {
            Err(Error::IncompatibleLoss("KL needs a synthetic source with known ground truth"))
        }
    }
}

fn draw_synthetic(p: &ProbVector, plan: &TrialPlan, rng: &mut NoiseSource) -> Result<Sample> {
    let alpha = plan.config.alpha;
    Ok(match (plan.scheme, plan.estimator.needs_split()) {
        (SamplingScheme::Poisson, false) => Sample::Full(sampling::sample_poisson_histogram(p, plan.n, rng)),
        (SamplingScheme::Poisson, true) => Sample::Split(sampling::split_sample(p, plan.n, alpha, rng)?),
        (SamplingScheme::Multinomial, false) => {
            Sample::Full(sampling::sample_multinomial_histogram(p, math::round(plan.n) as u64, rng))
        }
        (SamplingScheme::Multinomial, true) => {
            Sample::Split(sampling::split_multinomial(p, math::round(plan.n) as u64, alpha, rng)?)
        }
    })
}

/// Runs every trial of `plan` in index order.
pub fn run_trials(source: &DataSource, plan: &TrialPlan) -> Result<TrialStats> {
    plan.validate()?;
    let values = (0..plan.trials as u64)
        .map(|k| run_trial(source, plan, k))
        .collect::<Result<Vec<f64>>>()?;
    Ok(TrialStats::from_values(values, plan.loss))
}
