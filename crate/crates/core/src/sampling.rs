//! Seeded sampling of datasets and privacy noise.
//!
//! A [`NoiseSource`] owns a ChaCha stream. In [`NoiseMode::ZeroNoise`] every
//! draw is replaced by a deterministic value (zero for Laplace noise, the
//! rounded mean for counts) so fixtures can be traced by hand.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::math;
use crate::types::{Histogram, ProbVector, SplitSample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseMode {
    Random,
    ZeroNoise,
}

/// Single-owner random stream. Identical `(seed, stream, mode)` and call
/// sequence give bit-identical draws.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    seed: u64,
    mode: NoiseMode,
    rng: ChaCha20Rng,
}

impl NoiseSource {
    pub fn new(seed: u64, mode: NoiseMode) -> Self {
        Self { seed, mode, rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    pub fn random(seed: u64) -> Self {
        Self::new(seed, NoiseMode::Random)
    }

    pub fn zero_noise() -> Self {
        Self::new(0, NoiseMode::ZeroNoise)
    }

    /// The stream for trial `trial` under `master_seed`. It depends on nothing
    /// else, so trials can run in any order.
    pub fn for_trial(master_seed: u64, trial: u64, mode: NoiseMode) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
        rng.set_stream(trial);
        Self { seed: master_seed, mode, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    pub fn is_zero_noise(&self) -> bool {
        self.mode == NoiseMode::ZeroNoise
    }

    /// Uniform on `[0, 1)`. Not affected by the noise mode.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Laplace(0, `scale`) by inverting the CDF of a uniform draw.
    pub fn laplace(&mut self, scale: f64) -> f64 {
        debug_assert!(scale > 0.0);
        if self.is_zero_noise() {
            return 0.0;
        }
        loop {
            let u = self.uniform() - 0.5;
            let tail = 1.0 - 2.0 * u.abs();
            // u = -0.5 maps to an infinite draw.
            if tail > 0.0 {
                return -scale * u.signum() * math::ln(tail);
            }
        }
    }

    pub fn poisson(&mut self, mean: f64) -> f64 {
        debug_assert!(mean >= 0.0);
        if self.is_zero_noise() {
            return math::round(mean);
        }
        if mean <= 0.0 {
            return 0.0;
        }
        match Poisson::new(mean) {
            Ok(dist) => dist.sample(&mut self.rng),
            Err(_) => 0.0,
        }
    }

    /// Binomial(`trials`, `prob`); ZeroNoise gives `round(trials·prob)`.
    pub fn binomial(&mut self, trials: u64, prob: f64) -> u64 {
        let prob = prob.clamp(0.0, 1.0);
        if self.is_zero_noise() {
            return math::round(trials as f64 * prob) as u64;
        }
        if trials == 0 || prob == 0.0 {
            return 0;
        }
        if prob == 1.0 {
            return trials;
        }
        Binomial::new(trials, prob).map(|b| b.sample(&mut self.rng)).unwrap_or(0)
    }
}

/// Draws `counts[i] ~ Poi(n·pᵢ)` independently.
pub fn sample_poisson_histogram(p: &ProbVector, n: f64, rng: &mut NoiseSource) -> Histogram {
    Histogram::from_counts_unchecked(p.probs().iter().map(|&pi| rng.poisson(n * pi)).collect())
}

/// Draws counts jointly from `Mult(n, p)` by sequential conditional binomials.
///
/// In ZeroNoise mode the counts are `n·p` rounded by largest remainder, so
/// they still sum to `n`.
pub fn sample_multinomial_histogram(p: &ProbVector, n: u64, rng: &mut NoiseSource) -> Histogram {
    if rng.is_zero_noise() {
        return Histogram::from_counts_unchecked(largest_remainder(p.probs(), n));
    }
    let mut counts = Vec::with_capacity(p.len());
    let mut remaining = n;
    let mut mass_left = 1.0;
    for (i, &pi) in p.probs().iter().enumerate() {
        let draw = if i + 1 == p.len() {
            remaining
        } else if remaining == 0 || mass_left <= 0.0 {
            0
        } else {
            let k = rng.binomial(remaining, pi / mass_left);
            k.min(remaining)
        };
        counts.push(draw as f64);
        remaining -= draw;
        mass_left -= pi;
    }
    Histogram::from_counts_unchecked(counts)
}

fn largest_remainder(probs: &[f64], n: u64) -> Vec<f64> {
    let scaled: Vec<f64> = probs.iter().map(|p| p * n as f64).collect();
    let mut counts: Vec<u64> = scaled.iter().map(|s| math::floor(*s) as u64).collect();
    let assigned: u64 = counts.iter().sum();
    let mut order: Vec<usize> = (0..probs.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = scaled[a] - math::floor(scaled[a]);
        let rb = scaled[b] - math::floor(scaled[b]);
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(n.saturating_sub(assigned) as usize) {
        counts[i] += 1;
    }
    counts.into_iter().map(|c| c as f64).collect()
}

/// Draws independent halves `x ~ Poi(α·n·p)` and `x′ ~ Poi((1−α)·n·p)`.
pub fn split_sample(p: &ProbVector, n: f64, alpha: f64, rng: &mut NoiseSource) -> Result<SplitSample> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter { name: "alpha", reason: "must lie strictly inside (0, 1)" });
    }
    let x = sample_poisson_histogram(p, alpha * n, rng);
    let x_prime = sample_poisson_histogram(p, (1.0 - alpha) * n, rng);
    SplitSample::new(x, x_prime, alpha, n)
}

/// Multinomial counterpart of [`split_sample`]: `x ~ Mult(round(α·n), p)` and
/// `x′ ~ Mult(n − round(α·n), p)`.
pub fn split_multinomial(p: &ProbVector, n: u64, alpha: f64, rng: &mut NoiseSource) -> Result<SplitSample> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter { name: "alpha", reason: "must lie strictly inside (0, 1)" });
    }
    let first = (math::round(alpha * n as f64) as u64).min(n);
    let x = sample_multinomial_histogram(p, first, rng);
    let x_prime = sample_multinomial_histogram(p, n - first, rng);
    SplitSample::new(x, x_prime, alpha, n.max(1) as f64)
}

/// Splits every count `c` into `Bin(c, ratio)` and its complement.
pub fn thin(counts: &Histogram, ratio: f64, rng: &mut NoiseSource) -> (Histogram, Histogram) {
    let mut kept = Vec::with_capacity(counts.len());
    let mut rest = Vec::with_capacity(counts.len());
    for &c in counts.counts() {
        let whole = math::round(c) as u64;
        let k = rng.binomial(whole, ratio);
        kept.push(k as f64);
        rest.push((whole - k) as f64);
    }
    (Histogram::from_counts_unchecked(kept), Histogram::from_counts_unchecked(rest))
}

/// One Laplace(0, `scale_b`) draw.
pub fn sample_laplace(scale_b: f64, rng: &mut NoiseSource) -> f64 {
    rng.laplace(scale_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_mass_symbols_never_drawn() {
        let p = pv(&[0.0, 1.0]);
        let mut rng = NoiseSource::random(1);
        for _ in 0..200 {
            assert_eq!(sample_poisson_histogram(&p, 50.0, &mut rng)[0], 0.0);
            let s = split_sample(&p, 50.0, 0.3, &mut rng).unwrap();
            assert_eq!((s.x[0], s.x_prime[0]), (0.0, 0.0));
        }
    }

    #[test]
    fn zero_noise_fixtures() {
        let mut rng = NoiseSource::zero_noise();
        let h = sample_poisson_histogram(&pv(&[0.3, 0.7]), 10.0, &mut rng);
        assert_eq!(h.counts(), &[3.0, 7.0]);
        let s = split_sample(&pv(&[0.5, 0.5]), 100.0, 0.5, &mut rng).unwrap();
        assert_eq!(s.x.counts(), &[25.0, 25.0]);
        assert_eq!(s.x_prime.counts(), &[25.0, 25.0]);
        assert_eq!(sample_laplace(3.0, &mut rng), 0.0);
        let m = sample_multinomial_histogram(&pv(&[0.5, 0.25, 0.25]), 3, &mut rng);
        assert_eq!(m.total(), 3.0);
    }

    #[test]
    fn poisson_mean_matches() {
        let p = pv(&[0.5, 0.5]);
        let mut rng = NoiseSource::random(7);
        let draws = 10_000;
        let mean = (0..draws).map(|_| sample_poisson_histogram(&p, 1000.0, &mut rng)[0]).sum::<f64>()
            / draws as f64;
        let se = libm::sqrt(500.0 / draws as f64);
        assert!((mean - 500.0).abs() <= 3.0 * se, "mean {mean}");
    }

    #[test]
    fn multinomial_sums_and_frequencies() {
        let mut rng = NoiseSource::random(11);
        let single = pv(&[1.0]);
        assert_eq!(sample_multinomial_histogram(&single, 17, &mut rng).counts(), &[17.0]);

        let p = pv(&[0.25, 0.75]);
        let draws = 400_000;
        let mut hits = 0usize;
        for _ in 0..draws {
            let h = sample_multinomial_histogram(&p, 4, &mut rng);
            assert_eq!(h.total(), 4.0);
            if h[0] == 4.0 {
                hits += 1;
            }
        }
        let expect = 0.003_906_25;
        let freq = hits as f64 / draws as f64;
        let se = libm::sqrt(expect * (1.0 - expect) / draws as f64);
        assert!((freq - expect).abs() <= 3.0 * se, "freq {freq}");
    }

    #[test]
    fn split_halves_are_uncorrelated() {
        let p = pv(&[0.2, 0.8]);
        let mut rng = NoiseSource::random(3);
        let draws = 10_000;
        let pairs: Vec<(f64, f64)> = (0..draws)
            .map(|_| {
                let s = split_sample(&p, 100.0, 0.4, &mut rng).unwrap();
                (s.x[1], s.x_prime[1])
            })
            .collect();
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / draws as f64;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / draws as f64;
        let prods: Vec<f64> = pairs.iter().map(|(a, b)| (a - mx) * (b - my)).collect();
        let cov = prods.iter().sum::<f64>() / draws as f64;
        let var = prods.iter().map(|v| (v - cov) * (v - cov)).sum::<f64>() / draws as f64;
        let se = libm::sqrt(var / draws as f64);
        assert!(cov.abs() <= 3.0 * se, "cov {cov} se {se}");
        // x + x' has mean n·p.
        let total_mean = mx + my;
        let se_total = libm::sqrt(80.0 / draws as f64);
        assert!((total_mean - 80.0).abs() <= 3.0 * se_total);
    }

    #[test]
    fn laplace_moments() {
        let mut rng = NoiseSource::random(5);
        let draws = 100_000;
        let abs_mean = (0..draws).map(|_| sample_laplace(1.0, &mut rng).abs()).sum::<f64>() / draws as f64;
        assert!((abs_mean - 1.0).abs() <= 3.0 / libm::sqrt(draws as f64), "E|Z| {abs_mean}");

        let zs: Vec<f64> = (0..draws).map(|_| sample_laplace(2.0, &mut rng)).collect();
        let m = zs.iter().sum::<f64>() / draws as f64;
        let var = zs.iter().map(|z| (z - m) * (z - m)).sum::<f64>() / draws as f64;
        assert!((var - 8.0).abs() <= 0.4, "var {var}");
    }

    #[test]
    fn streams_reproducible_and_independent_of_order() {
        let p = pv(&[0.1, 0.2, 0.7]);
        let draw = |k: u64| {
            let mut rng = NoiseSource::for_trial(42, k, NoiseMode::Random);
            sample_poisson_histogram(&p, 30.0, &mut rng)
        };
        let forward: Vec<Histogram> = (0..5).map(draw).collect();
        let backward: Vec<Histogram> = (0..5).rev().map(draw).collect();
        for (k, h) in forward.iter().enumerate() {
            assert_eq!(h, &backward[4 - k]);
        }
        let mut a = NoiseSource::random(9);
        let mut b = NoiseSource::random(9);
        assert_eq!(
            sample_poisson_histogram(&p, 1e4, &mut a),
            sample_poisson_histogram(&p, 1e4, &mut b)
        );
    }

    #[test]
    fn large_means_are_sampled() {
        let p = pv(&[1.0]);
        let mut rng = NoiseSource::random(2);
        let draws = 2000;
        let mean = (0..draws).map(|_| sample_poisson_histogram(&p, 1e6, &mut rng)[0]).sum::<f64>()
            / draws as f64;
        assert!((mean - 1e6).abs() <= 3.0 * libm::sqrt(1e6 / draws as f64));
    }

    #[test]
    fn thinning_preserves_totals() {
        let h = Histogram::new(vec![10.0, 0.0, 3.0]).unwrap();
        let mut rng = NoiseSource::random(4);
        let (a, b) = thin(&h, 0.5, &mut rng);
        assert_eq!(a.merged(&b).unwrap(), h);
        let (a, b) = thin(&h, 0.5, &mut NoiseSource::zero_noise());
        assert_eq!(a.counts(), &[5.0, 0.0, 2.0]);
        assert_eq!(b.counts(), &[5.0, 0.0, 1.0]);
    }
}
