//! Seeded randomness and the sampling distributions shared by all algorithms.

mod variation;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{param, Result};

pub(crate) use variation::bitwise_mutation;
pub use variation::{cross_biased, mutate_ell, uniform_crossover};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child of a source seeded with `seed`.
///
/// `mix64(seed ^ mix64(index + GOLDEN_GAMMA))`. Logged seeds can be
/// re-derived by hand with this formula.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(GOLDEN_GAMMA)))
}

/// A reproducible random stream (ChaCha8 keyed by a 64-bit seed).
///
/// The stream is identical on every platform for a given seed.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child source, determined only by this source's seed and
    /// `index` (not by how much of this stream has been consumed).
    pub fn derive(&self, index: u64) -> RandomSource {
        RandomSource::new(derive_seed(self.seed, index))
    }

    /// `Bin(n, p)` conditioned on a positive outcome, by inversion of the
    /// truncated CDF (cost proportional to the returned value).
    pub fn sample_bin_gt0(&mut self, n: usize, p: f64) -> Result<usize> {
        if n == 0 {
            return param("Bin>0 needs n >= 1");
        }
        if !(p > 0.0 && p <= 1.0) {
            return param(format!("Bin>0 needs 0 < p <= 1, got {p}"));
        }
        if p == 1.0 || n == 1 {
            return Ok(n);
        }
        let nf = n as f64;
        let log_q = (-p).ln_1p();
        // P(ℓ = 1) and P(ℓ > 0), both computed without cancellation.
        let mut pk = (nf.ln() + p.ln() + (nf - 1.0) * log_q).exp();
        let positive_mass = -(nf * log_q).exp_m1();
        if pk < f64::MIN_POSITIVE {
            // pmf underflows at k = 1 (large n, large p); rejection is cheap here.
            return Ok(self.sample_bin_gt0_by_rejection(n, p));
        }
        let ratio = p / (1.0 - p);
        let u = self.rng.random::<f64>() * positive_mass;
        let mut acc = 0.0;
        for k in 1..n {
            acc += pk;
            if u < acc {
                return Ok(k);
            }
            pk *= (n - k) as f64 / (k + 1) as f64 * ratio;
        }
        Ok(n)
    }

    fn sample_bin_gt0_by_rejection(&mut self, n: usize, p: f64) -> usize {
        loop {
            let count = (0..n).filter(|_| self.rng.random_bool(p)).count();
            if count > 0 {
                return count;
            }
        }
    }

    /// One draw from `P(k) ∝ k^-beta` on `1..=n_max`.
    pub fn sample_power_law(&mut self, n_max: usize, beta: f64) -> Result<usize> {
        Ok(PowerLaw::new(n_max, beta)?.sample(self))
    }

    /// Normal variate rounded half away from zero, redrawn while `<= 0`,
    /// then capped at `cap`.
    pub fn sample_trunc_normal_gt0(&mut self, mean: f64, variance: f64, cap: usize) -> Result<usize> {
        if cap == 0 {
            return param("truncated normal needs cap >= 1");
        }
        if !mean.is_finite() || !variance.is_finite() || variance < 0.0 {
            return param(format!("invalid normal parameters ({mean}, {variance})"));
        }
        let clamp = |v: f64| (v.max(1.0) as usize).min(cap);
        if variance == 0.0 {
            return Ok(clamp(mean.round()));
        }
        let normal = Normal::new(mean, variance.sqrt())
            .map_err(|e| crate::Error::Parameter(e.to_string()))?;
        // Only reachable with the bulk of the mass far below zero.
        const MAX_REDRAWS: usize = 100_000;
        for _ in 0..MAX_REDRAWS {
            let v = normal.sample(&mut self.rng).round();
            if v > 0.0 {
                return Ok(clamp(v));
            }
        }
        Ok(1)
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p.clamp(0.0, 1.0))
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Precomputed cumulative table for the truncated power law `k^-beta`.
#[derive(Clone, Debug)]
pub struct PowerLaw {
    cumulative: Vec<f64>,
}

impl PowerLaw {
    pub fn new(n_max: usize, beta: f64) -> Result<Self> {
        if n_max < 1 {
            return param("power law needs n_max >= 1");
        }
        if !beta.is_finite() {
            return param(format!("power-law exponent must be finite, got {beta}"));
        }
        let cumulative = (1..=n_max)
            .scan(0.0, |acc, k| {
                *acc += (k as f64).powf(-beta);
                Some(*acc)
            })
            .collect();
        Ok(PowerLaw { cumulative })
    }

    pub fn n_max(&self) -> usize {
        self.cumulative.len()
    }

    pub fn probability(&self, k: usize) -> f64 {
        let total = self.cumulative[self.cumulative.len() - 1];
        let below = if k > 1 { self.cumulative[k - 2] } else { 0.0 };
        (self.cumulative[k - 1] - below) / total
    }

    pub fn sample(&self, rng: &mut RandomSource) -> usize {
        let total = self.cumulative[self.cumulative.len() - 1];
        let u = rng.unit() * total;
        let k = self.cumulative.partition_point(|&c| c <= u);
        k.min(self.cumulative.len() - 1) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    const DRAWS: usize = 1_000_000;

    fn conditional_binomial_pmf(n: usize, p: f64) -> Vec<f64> {
        // Direct product form, independent of the sampler's recurrence.
        let choose = |n: usize, k: usize| -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
        };
        let positive = 1.0 - (1.0 - p).powi(n as i32);
        (0..=n)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    choose(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32) / positive
                }
            })
            .collect()
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = RandomSource::new(7);
        let mut b = RandomSource::new(7);
        let xs: Vec<u64> = (0..32).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..32).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn derived_children_differ() {
        let root = RandomSource::new(1);
        let mut seen = std::collections::HashSet::new();
        for i in 0..1000 {
            assert!(seen.insert(root.derive(i).seed()));
        }
        // Consumption of the parent does not affect derivation.
        let mut used = root.clone();
        used.next_u64();
        assert_eq!(used.derive(3).seed(), root.derive(3).seed());
    }

    #[test]
    fn bin_gt0_trivial_cases() {
        let mut rng = RandomSource::new(0);
        for _ in 0..100 {
            assert_eq!(rng.sample_bin_gt0(5, 1.0).unwrap(), 5);
            assert_eq!(rng.sample_bin_gt0(1, 0.3).unwrap(), 1);
        }
        assert!(rng.sample_bin_gt0(5, 0.0).is_err());
        assert!(rng.sample_bin_gt0(5, 1.5).is_err());
        assert!(rng.sample_bin_gt0(0, 0.5).is_err());
    }

    #[test]
    fn bin_gt0_probability_of_one() {
        let mut rng = RandomSource::new(11);
        let hits = (0..DRAWS).filter(|_| rng.sample_bin_gt0(10, 0.1).unwrap() == 1).count();
        let expected = 10.0 * 0.1 * 0.9f64.powi(9) / (1.0 - 0.9f64.powi(10));
        assert!((hits as f64 / DRAWS as f64 - expected).abs() < 0.01);
    }

    #[test]
    fn bin_gt0_chi_square() {
        for (seed, (n, p)) in [(10usize, 0.1), (40, 0.025), (40, 0.5)].into_iter().enumerate() {
            let mut rng = RandomSource::new(100 + seed as u64);
            let mut counts = vec![0usize; n + 1];
            for _ in 0..DRAWS {
                counts[rng.sample_bin_gt0(n, p).unwrap()] += 1;
            }
            assert_eq!(counts[0], 0);
            let pmf = conditional_binomial_pmf(n, p);
            // Pool sparse cells so every expected count is >= 5.
            let (mut stat, mut cells) = (0.0, 0usize);
            let (mut obs_pool, mut exp_pool) = (0.0, 0.0);
            for k in 1..=n {
                obs_pool += counts[k] as f64;
                exp_pool += pmf[k] * DRAWS as f64;
                if exp_pool >= 5.0 {
                    stat += (obs_pool - exp_pool).powi(2) / exp_pool;
                    cells += 1;
                    obs_pool = 0.0;
                    exp_pool = 0.0;
                }
            }
            if exp_pool > 0.0 {
                stat += (obs_pool - exp_pool).powi(2) / exp_pool.max(1e-12);
                cells += 1;
            }
            let critical = ChiSquared::new((cells - 1) as f64).unwrap().inverse_cdf(0.999);
            assert!(stat < critical, "n={n} p={p}: chi2 {stat} >= {critical}");
        }
    }

    #[test]
    fn bin_gt0_large_n_large_p_uses_fallback() {
        let mut rng = RandomSource::new(3);
        let mean = (0..2000).map(|_| rng.sample_bin_gt0(2000, 0.99).unwrap()).sum::<usize>() as f64 / 2000.0;
        assert!((mean - 1980.0).abs() < 2.0);
    }

    #[test]
    fn power_law_cases() {
        let mut rng = RandomSource::new(5);
        for _ in 0..100 {
            assert_eq!(rng.sample_power_law(1, 1.5).unwrap(), 1);
        }
        assert!(rng.sample_power_law(0, 1.5).is_err());

        let law = PowerLaw::new(2, 1.5).unwrap();
        let ones = (0..DRAWS).filter(|_| law.sample(&mut rng) == 1).count();
        let expected = 1.0 / (1.0 + 2f64.powf(-1.5));
        assert!((ones as f64 / DRAWS as f64 - expected).abs() < 0.01);
    }

    #[test]
    fn power_law_mean_and_pmf() {
        let mut rng = RandomSource::new(6);
        let law = PowerLaw::new(20, 1.5).unwrap();
        let norm: f64 = (1..=20).map(|k| (k as f64).powf(-1.5)).sum();
        let exact_mean: f64 = (1..=20).map(|k| k as f64 * (k as f64).powf(-1.5)).sum::<f64>() / norm;
        let mut counts = [0usize; 21];
        for _ in 0..DRAWS {
            counts[law.sample(&mut rng)] += 1;
        }
        let mean = counts.iter().enumerate().map(|(k, &c)| (k * c) as f64).sum::<f64>() / DRAWS as f64;
        assert!((mean - exact_mean).abs() / exact_mean < 0.01);
        // Relative pmf error on the cells with enough mass to resolve 1%.
        for (k, &count) in counts.iter().enumerate().take(4).skip(1) {
            let p = (k as f64).powf(-1.5) / norm;
            assert!((law.probability(k) - p).abs() < 1e-12);
            let emp = count as f64 / DRAWS as f64;
            assert!((emp - p).abs() / p < 0.01, "k={k}: {emp} vs {p}");
        }
    }

    #[test]
    fn trunc_normal_degenerate() {
        let mut rng = RandomSource::new(9);
        assert_eq!(rng.sample_trunc_normal_gt0(3.0, 0.0, 10).unwrap(), 3);
        assert_eq!(rng.sample_trunc_normal_gt0(-4.0, 0.0, 10).unwrap(), 1);
        for _ in 0..1000 {
            assert_eq!(rng.sample_trunc_normal_gt0(100.0, 1.0, 10).unwrap(), 10);
        }
        assert!(rng.sample_trunc_normal_gt0(1.0, 1.0, 0).is_err());
    }

    /// Box–Muller + rejection, written without the crate's sampler.
    fn oracle_trunc_normal(rng: &mut RandomSource, mean: f64, sd: f64, cap: i64) -> i64 {
        loop {
            let u1: f64 = 1.0 - rng.unit();
            let u2: f64 = rng.unit();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            let v = (mean + sd * z).round() as i64;
            if v >= 1 {
                return v.min(cap);
            }
        }
    }

    #[test]
    fn trunc_normal_matches_rejection_oracle() {
        let mut rng = RandomSource::new(21);
        let mut oracle_rng = RandomSource::new(22);
        let mut ours = vec![0usize; 41];
        let mut theirs = vec![0usize; 41];
        for _ in 0..DRAWS {
            ours[rng.sample_trunc_normal_gt0(2.0, 1.0, 40).unwrap()] += 1;
            theirs[oracle_trunc_normal(&mut oracle_rng, 2.0, 1.0, 40) as usize] += 1;
        }
        let tv: f64 = ours
            .iter()
            .zip(&theirs)
            .map(|(&a, &b)| (a as f64 - b as f64).abs() / DRAWS as f64)
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 0.02, "total variation {tv}");
        assert_eq!(ours[0], 0);
    }
}
