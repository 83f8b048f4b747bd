//! Seeded synthetic sample generators, used by the test suites, the
//! benchmarks and for regenerating the repository fixtures.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::sample::{mean_and_sq_dev, MetricSample, MetricSampleSet};

/// n iid Normal(mu, sigma) values with sequential subject ids.
pub fn normal_samples(n: usize, mu: f64, sigma: f64, seed: u64) -> Result<MetricSampleSet> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if sigma <= 0.0 {
        return Err(Error::InvalidConfig(format!("sigma {sigma} must be > 0")));
    }
    let normal = Normal::new(mu, sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|i| MetricSample::new(format!("s{:04}", i + 1), normal.sample(&mut rng)))
        .collect::<Result<Vec<_>>>()?;
    MetricSampleSet::new(samples, "synthetic", None)
}

/// n iid Normal(mu, sigma) values rejection-sampled into `[lo, hi]`,
/// suitable for bounded metrics such as Dice in percent.
pub fn bounded_normal_samples(
    n: usize,
    mu: f64,
    sigma: f64,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<MetricSampleSet> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let normal = Normal::new(mu, sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|i| {
            let v = loop {
                let v = normal.sample(&mut rng);
                if (lo..=hi).contains(&v) {
                    break v;
                }
            };
            MetricSample::new(format!("s{:04}", i + 1), v)
        })
        .collect::<Result<Vec<_>>>()?;
    MetricSampleSet::new(samples, "synthetic", Some((lo, hi)))
}

/// A Normal-shaped sample affinely rescaled so that its population mean and
/// population standard deviation equal `mu` and `sigma` exactly (up to
/// floating round-off), for tests that pin closed-form outputs.
pub fn standardized_normal_samples(
    n: usize,
    mu: f64,
    sigma: f64,
    seed: u64,
) -> Result<MetricSampleSet> {
    if n < 2 {
        return Err(Error::DegenerateSpread { n });
    }
    let raw = normal_samples(n, 0.0, 1.0, seed)?;
    let values = raw.values_vec();
    let (m, sq_dev) = mean_and_sq_dev(&values);
    let s = (sq_dev / n as f64).sqrt();
    let samples = values
        .iter()
        .enumerate()
        .map(|(i, &v)| MetricSample::new(format!("s{:04}", i + 1), mu + sigma * (v - m) / s))
        .collect::<Result<Vec<_>>>()?;
    MetricSampleSet::new(samples, "synthetic", None)
}
