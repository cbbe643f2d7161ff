//! Minimax rates, per-instance lower bounds and closed-form Poisson and Laplace helpers.
//!
//! The per-instance bounds hold up to unstated universal constants. Every
//! calculator here reports the bracketed expression with constant 1, so the
//! values are only meaningful as order-of-magnitude diagnostics (for example
//! in [`optimality_ratio`]), never as certified bounds.

use crate::error::{Error, Result};
use crate::math;
use crate::types::{ln_d, PrivacyParams, ProbVector};

/// Upper bound `ln(1 + d/n)` on the expected KL error of add-one smoothing
/// from `n` multinomial samples.
pub fn minimax_nondp_upper(d: usize, n: f64) -> f64 {
    math::ln_1p(d as f64 / n)
}

/// Private minimax rate `ln(1 + d/(n·min(ε, 1)))`.
pub fn minimax_dp(d: usize, n: f64, privacy: &PrivacyParams) -> f64 {
    math::ln_1p(d as f64 / (n * privacy.clamped_epsilon()))
}

/// One per-instance lower bound together with the small set it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceLower {
    pub value: f64,
    pub t_used: f64,
    pub small_set_size: usize,
    pub small_set_mass: f64,
}

/// Non-private per-instance lower bound under the additive neighborhood.
///
/// `L′ = {i : pᵢ ≤ t/n}`; returns
/// `ln(1+d_s)/n + p_s·ln(1 + d_s/(n·p_s)) + Σᵢ min{pᵢ, 1/n}`.
/// Requires `t ≥ 1`, `n ≥ 4` and `d ≥ 2`.
pub fn instance_lower_nondp(p: &ProbVector, n: f64, t: f64) -> Result<InstanceLower> {
    if !(t >= 1.0) {
        return Err(Error::ConditionViolated("t ≥ 1"));
    }
    if !(n >= 4.0) {
        return Err(Error::ConditionViolated("n ≥ 4"));
    }
    if p.len() < 2 {
        return Err(Error::ConditionViolated("d ≥ 2"));
    }
    let (small_set_size, small_set_mass) = small_set(p, t / n);
    let statistical: f64 = p.probs().iter().map(|&pi| pi.min(1.0 / n)).sum();
    let value = math::ln_1p(small_set_size as f64) / n
        + mass_term(small_set_mass, small_set_size as f64 / n)
        + statistical;
    Ok(InstanceLower { value, t_used: t, small_set_size, small_set_mass })
}

/// Private per-instance lower bound.
///
/// `L′ = {i : pᵢ ≤ t/(nε)}`; returns
/// `Σᵢ min{pᵢ, 1/(pᵢn²ε²)} + ln(1+d_s)/(nε) + p_s·ln(1 + d_s/(nε·p_s))`.
/// Requires `t ≥ 1`, `nε ≥ 1`, `d ≥ 2` and `δ ≤ ε`.
pub fn instance_lower_dp(p: &ProbVector, n: f64, privacy: &PrivacyParams, t: f64) -> Result<InstanceLower> {
    let ne = n * privacy.epsilon;
    if !(t >= 1.0) {
        return Err(Error::ConditionViolated("t ≥ 1"));
    }
    if !(ne >= 1.0) {
        return Err(Error::ConditionViolated("n·ε ≥ 1"));
    }
    if p.len() < 2 {
        return Err(Error::ConditionViolated("d ≥ 2"));
    }
    if privacy.delta > privacy.epsilon {
        return Err(Error::ConditionViolated("δ ≤ ε"));
    }
    let (small_set_size, small_set_mass) = small_set(p, t / ne);
    let large: f64 = p
        .probs()
        .iter()
        .map(|&pi| if pi > 0.0 { pi.min(1.0 / (pi * ne * ne)) } else { 0.0 })
        .sum();
    let value = large + math::ln_1p(small_set_size as f64) / ne + mass_term(small_set_mass, small_set_size as f64 / ne);
    Ok(InstanceLower { value, t_used: t, small_set_size, small_set_mass })
}

fn small_set(p: &ProbVector, cut: f64) -> (usize, f64) {
    p.probs()
        .iter()
        .filter(|&&pi| pi <= cut)
        .fold((0, 0.0), |(k, m), &pi| (k + 1, m + pi))
}

/// `mass · ln(1 + spread/mass)`, continuous extension 0 at `mass = 0`.
fn mass_term(mass: f64, spread: f64) -> f64 {
    if mass > 0.0 {
        mass * math::ln_1p(spread / mass)
    } else {
        0.0
    }
}

/// Default non-private neighborhood size `max{1, 2·ln ln d}`.
pub fn default_t_nondp(d: usize) -> f64 {
    let lnln = math::ln(ln_d(d));
    if lnln.is_finite() {
        (2.0 * lnln).max(1.0)
    } else {
        1.0
    }
}

/// Default private neighborhood size `24·ln d` (at least 1).
pub fn default_t_dp(d: usize) -> f64 {
    (24.0 * ln_d(d)).max(1.0)
}

/// `KL(Poi(k) ‖ Poi(m)) = m − k + k·ln(k/m)`.
pub fn poisson_kl(m: f64, k: f64) -> f64 {
    m - k + k * math::ln(k / m)
}

/// Chernoff-style bounds for `x + z` with `x ~ Poi(a)`, `z ~ Lap(0, b)`:
/// returns `(bound on Pr[x+z ≤ c], bound on Pr[x+z ≥ c])`.
pub fn poisson_laplace_tail_upper(a: f64, b: f64, c: f64) -> (f64, f64) {
    let scale = b.max(1.0);
    let lower = 4.0 / 3.0 * math::exp((-a / 3.0 + c / 2.0) / scale);
    let upper = 4.0 / 3.0 * math::exp((a - c) / 2.0 / scale);
    (lower, upper)
}

/// Ratio of an observed error to a lower bound.
pub fn optimality_ratio(empirical_kl: f64, lower: f64) -> Result<f64> {
    if lower == 0.0 {
        return Err(Error::DivideByZero);
    }
    Ok(empirical_kl / lower)
}

/// Everything [`report`] computes for one `(p, n, ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub nondp_minimax: f64,
    pub nondp_instance: InstanceLower,
    pub dp_minimax: Option<f64>,
    pub dp_instance: Option<InstanceLower>,
}

/// Computes both minimax rates and both per-instance bounds. The private
/// fields are skipped when `privacy` is `None`; `t` values default to
/// [`default_t_nondp`] and [`default_t_dp`].
pub fn report(
    p: &ProbVector,
    n: f64,
    privacy: Option<&PrivacyParams>,
    t_nondp: Option<f64>,
    t_dp: Option<f64>,
) -> Result<BoundReport> {
    let d = p.len();
    let nondp_instance = instance_lower_nondp(p, n, t_nondp.unwrap_or_else(|| default_t_nondp(d)))?;
    let (dp_minimax, dp_instance) = match privacy {
        Some(priv_) => (
            Some(minimax_dp(d, n, priv_)),
            Some(instance_lower_dp(p, n, priv_, t_dp.unwrap_or_else(|| default_t_dp(d)))?),
        ),
        None => (None, None),
    };
    Ok(BoundReport { nondp_minimax: minimax_nondp_upper(d, n), nondp_instance, dp_minimax, dp_instance })
}
