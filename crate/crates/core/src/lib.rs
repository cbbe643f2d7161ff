//! Discrete distribution estimation under KL-divergence loss, with and
//! without differential privacy.
//!
//! The crate is `no_std` (it needs `alloc`) and carries only the algorithmic
//! pieces: domain types, seeded samplers, the estimators, closed-form bound
//! calculators and the Monte-Carlo trial runner. File formats and the command
//! line live in the `kldist` companion crate.
//!
//! Estimators:
//!
//! | Kind | Short name | Private |
//! |------|------------|---------|
//! | [`EstimatorKind::AddConstant`] | `addconst` | no |
//! | [`EstimatorKind::AddConstantDp`] | `addconst_dp` | ε-DP |
//! | [`EstimatorKind::GoodTuring`] | `gt` | no |
//! | [`EstimatorKind::SamplingTwice`] | `st` | no |
//! | [`EstimatorKind::SamplingTwiceDp`] | `st_dp` | ε-DP |
//!
//! The two "sampling twice" estimators consume a [`SplitSample`]: one half of
//! the data picks the set of low-count symbols, the other half estimates that
//! set's combined mass. Every private statistic has ℓ₁-sensitivity one, so
//! Laplace noise of scale `1/ε` suffices.
//!
//! All losses are in nats.
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bounds;
mod error;
pub mod estimators;
pub mod eval;
mod math;
pub mod sampling;
pub mod source;
pub mod types;

pub use error::{Error, Result};
pub use estimators::{estimate, EstimatorKind, Sample};
pub use eval::{kl_divergence, nll, run_trial, run_trials, LossKind, SamplingScheme, TrialPlan, TrialStats};
pub use sampling::{NoiseMode, NoiseSource};
pub use source::DataSource;
pub use types::{normalize, validate_prob_vector, EstimatorConfig, Histogram, PrivacyParams, ProbVector, SplitSample};
