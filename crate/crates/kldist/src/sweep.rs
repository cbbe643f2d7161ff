//! Benchmark sweeps over `(n, d, ε, estimator)` and hyperparameter grids.

use std::fmt::Write as _;

use kldist_core::source::{concentrated, power_law};
use kldist_core::{
    DataSource, EstimatorConfig, EstimatorKind, LossKind, PrivacyParams, ProbVector, SamplingScheme, TrialPlan,
};

use crate::error::{Error, Result};
use crate::format::sig9;
use crate::io::ResultRow;
use crate::runner::run_trials_parallel;

/// Split ratios searched by default.
pub const ALPHA_GRID: [f64; 7] = [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99];
/// Threshold multipliers of `ln d` searched by default.
pub const TAU_MULT_GRID: [f64; 8] = [0.0, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0];

/// Which distribution a sweep samples from.
#[derive(Debug, Clone, PartialEq)]
pub enum DistSpec {
    PowerLaw { beta: f64 },
    Uniform,
    Concentrated { masses: Vec<f64> },
    /// A loaded corpus; its dimension overrides the `d` axis.
    File(DataSource),
}

impl DistSpec {
    pub fn source(&self, d: usize) -> Result<DataSource> {
        Ok(match self {
            DistSpec::PowerLaw { beta } => {
                DataSource::synthetic(power_law(d, *beta)?, format!("powerlaw(beta={})", sig9(*beta)))
            }
            DistSpec::Uniform => DataSource::synthetic(ProbVector::uniform(d)?, "uniform"),
            DistSpec::Concentrated { masses } => DataSource::synthetic(concentrated(d, masses)?, "concentrated"),
            DistSpec::File(src) => src.clone(),
        })
    }

    fn dims(&self, requested: &[usize]) -> Vec<usize> {
        match self {
            DistSpec::File(src) => vec![src.dim()],
            _ => requested.to_vec(),
        }
    }

    pub fn default_loss(&self) -> LossKind {
        match self {
            DistSpec::File(_) => LossKind::Nll,
            _ => LossKind::Kl,
        }
    }
}

/// Per-run overrides of the tuned estimator defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConfigOverrides {
    pub alpha: Option<f64>,
    /// Threshold as a multiple of `ln d`.
    pub tau_mult: Option<f64>,
    pub c: Option<f64>,
}

impl ConfigOverrides {
    /// Tuned defaults for `kind` at `(d, ε)` with the overrides applied.
    pub fn config(&self, kind: EstimatorKind, d: usize, privacy: &PrivacyParams) -> Result<EstimatorConfig> {
        let mut cfg = EstimatorConfig::tuned(kind, d, privacy);
        if let Some(alpha) = self.alpha {
            cfg.alpha = alpha;
        }
        if let Some(c) = self.c {
            cfg.add_constant = c;
        }
        if let Some(mult) = self.tau_mult {
            cfg = cfg.with_tau_multiplier(mult, d);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub dist: DistSpec,
    pub n_values: Vec<f64>,
    pub d_values: Vec<usize>,
    pub eps_values: Vec<f64>,
    pub estimators: Vec<EstimatorKind>,
    pub trials: usize,
    pub seed: u64,
    pub loss: LossKind,
    pub overrides: ConfigOverrides,
    pub scheme: SamplingScheme,
    pub threads: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.d_values.is_empty() || self.eps_values.is_empty() {
            return Err(Error::Usage("every swept axis needs at least one value".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Usage("at least one estimator is required".into()));
        }
        if self.trials == 0 {
            return Err(Error::Usage("--trials must be at least 1".into()));
        }
        Ok(())
    }

    fn plan(&self, kind: EstimatorKind, config: EstimatorConfig, privacy: PrivacyParams, n: f64) -> TrialPlan {
        TrialPlan::new(kind, config, privacy, n, self.trials, self.seed, self.loss).with_scheme(self.scheme)
    }
}

/// One row per `(n, d, ε, estimator)` cell, n-major. Every cell uses the
/// sweep seed as its master seed.
pub fn benchmark(spec: &SweepSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &n in &spec.n_values {
        for d in spec.dist.dims(&spec.d_values) {
            let source = spec.dist.source(d)?;
            for &eps in &spec.eps_values {
                let privacy = PrivacyParams::pure(eps)?;
                for &kind in &spec.estimators {
                    let config = spec.overrides.config(kind, d, &privacy)?;
                    let stats = run_trials_parallel(&source, &spec.plan(kind, config, privacy, n), spec.threads)?;
                    rows.push(ResultRow::from_stats(n, d, eps, kind, &stats, spec.seed));
                }
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub alpha: f64,
    pub tau_mult: f64,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

/// Evaluates every `(α, τ-multiplier)` pair for a single sampling-twice
/// estimator at a single `(n, d, ε)`. Rows come back sorted by mean loss,
/// ties in grid order.
pub fn grid_search(spec: &SweepSpec, alphas: &[f64], tau_mults: &[f64]) -> Result<Vec<GridRow>> {
    spec.validate()?;
    let kind = match spec.estimators.as_slice() {
        [k] if k.needs_split() => *k,
        _ => return Err(Error::Usage("grid search needs exactly one estimator, st or st_dp".into())),
    };
    let (n, eps) = match (spec.n_values.as_slice(), spec.eps_values.as_slice()) {
        ([n], [e]) => (*n, *e),
        _ => return Err(Error::Usage("grid search takes a single --n and --eps".into())),
    };
    let d = match spec.dist.dims(&spec.d_values).as_slice() {
        [d] => *d,
        _ => return Err(Error::Usage("grid search takes a single --d".into())),
    };
    if alphas.is_empty() || tau_mults.is_empty() {
        return Err(Error::Usage("grids must be nonempty".into()));
    }
    let source = spec.dist.source(d)?;
    let privacy = PrivacyParams::pure(eps)?;
    let mut rows = Vec::with_capacity(alphas.len() * tau_mults.len());
    for &alpha in alphas {
        for &tau_mult in tau_mults {
            let overrides = ConfigOverrides { alpha: Some(alpha), tau_mult: Some(tau_mult), ..spec.overrides };
            let config = overrides.config(kind, d, &privacy)?;
            let stats = run_trials_parallel(&source, &spec.plan(kind, config, privacy, n), spec.threads)?;
            rows.push(GridRow { alpha, tau_mult, mean: stats.mean, std: stats.std, trials: stats.trials });
        }
    }
    rows.sort_by(|a, b| a.mean.total_cmp(&b.mean));
    Ok(rows)
}

pub const GRID_HEADER: &str = "alpha,tau_mult,mean,std,trials";

pub fn render_grid_csv(rows: &[GridRow]) -> String {
    let mut out = String::from(GRID_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", sig9(r.alpha), sig9(r.tau_mult), sig9(r.mean), sig9(r.std), r.trials);
    }
    out
}
