//! Subsampling study: repeatedly draw size-k subsets of a test set without
//! replacement, estimate precision on each draw via both the Gaussian
//! closed form and the bootstrap, and aggregate mean ± std across draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bootstrap::{bootstrap_estimate, BootstrapConfig};
use crate::error::{Error, Result};
use crate::sample::{gaussian_estimate, mean_and_sq_dev, MetricSampleSet, SpreadConvention, Z_95};

/// Default number of draws per subsample size (J).
pub const DEFAULT_DRAWS: usize = 100;

/// Configuration of a subsampling study.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleConfig {
    /// Subsample sizes K; every k must satisfy 2 <= k <= n.
    pub sizes: Vec<usize>,
    /// Number of draws per size (J).
    pub draws: usize,
    /// Bootstrap settings applied to every draw. The configured bootstrap
    /// seed is remixed per (k, j) so draws get independent resampling
    /// randomness; see [`derive_seed`].
    pub bootstrap: BootstrapConfig,
    /// Master seed for the without-replacement draws.
    pub seed: u64,
    /// Critical value for the Gaussian intervals.
    pub z: f64,
    /// Spread convention for the Gaussian estimates.
    pub convention: SpreadConvention,
}

impl SubsampleConfig {
    /// Defaults for a test set of size n: sizes {10, 20, 30, 50, 100, n}
    /// clipped to the population, 100 draws, default bootstrap.
    pub fn for_population(n: usize, seed: u64) -> Self {
        Self {
            sizes: default_sizes(n),
            draws: DEFAULT_DRAWS,
            bootstrap: BootstrapConfig::with_seed(seed),
            seed,
            z: Z_95,
            convention: SpreadConvention::Population,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidConfig("sizes list is empty".into()));
        }
        for &k in &self.sizes {
            if k < 2 {
                return Err(Error::InvalidConfig(format!(
                    "subsample size {k} must be >= 2"
                )));
            }
            if k > n {
                return Err(Error::SizeExceedsPopulation { k, n });
            }
        }
        if self.draws == 0 {
            return Err(Error::InvalidConfig("draws must be >= 1".into()));
        }
        if self.bootstrap.resamples == 0 {
            return Err(Error::InvalidConfig("resamples must be >= 1".into()));
        }
        Ok(())
    }
}

/// The standard size ladder {10, 20, 30, 50, 100, n}, keeping only sizes
/// that fit the population and always ending at n itself.
pub fn default_sizes(n: usize) -> Vec<usize> {
    let mut sizes: Vec<usize> = [10, 20, 30, 50, 100]
        .into_iter()
        .filter(|&k| k >= 2 && k < n)
        .collect();
    if n >= 2 {
        sizes.push(n);
    }
    sizes
}

/// Mean and population-convention standard deviation of one statistic
/// across the J draws of a given size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
}

fn aggregate(values: &[f64]) -> Aggregate {
    let (mean, sq_dev) = mean_and_sq_dev(values);
    Aggregate {
        mean,
        std: (sq_dev / values.len() as f64).sqrt(),
    }
}

/// Per-size row of a study report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeRow {
    pub k: usize,
    pub mu: Aggregate,
    pub sigma: Aggregate,
    pub sem: Aggregate,
    pub width: Aggregate,
    pub mu_star: Aggregate,
    pub sem_star: Aggregate,
    pub width_star: Aggregate,
}

/// Study results: one row per size, plus the provenance needed to
/// reproduce the run. Aggregate stds use the population convention
/// (divide by J).
#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleReport {
    pub rows: Vec<SizeRow>,
    pub seed: u64,
    pub draws: usize,
    pub resamples: usize,
    pub z: f64,
    pub convention: SpreadConvention,
}

/// Stable seed derivation for one unit of work, splitmix64-mixed from the
/// master seed and the unit coordinates. Adding sizes to K or raising J
/// never perturbs the seeds of existing (k, j) cells.
pub fn derive_seed(master: u64, k: u64, j: u64, salt: u64) -> u64 {
    let mut state = master;
    for part in [salt, k, j] {
        state = splitmix64(state ^ part);
    }
    state
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const DRAW_SALT: u64 = 0x5344; // "SD"
const BOOT_SALT: u64 = 0x5342; // "SB"

/// k distinct subjects drawn uniformly without replacement, deterministic
/// in `draw_seed`. The drawn set preserves the original sample order.
pub fn draw_subsample(
    samples: &MetricSampleSet,
    k: usize,
    draw_seed: u64,
) -> Result<MetricSampleSet> {
    let n = samples.len();
    if k == 0 {
        return Err(Error::InvalidConfig("subsample size must be >= 1".into()));
    }
    if k > n {
        return Err(Error::SizeExceedsPopulation { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(draw_seed);
    let mut indices = rand::seq::index::sample(&mut rng, n, k).into_vec();
    indices.sort_unstable();
    samples.select(&indices)
}

/// Run the full study: for every size k and every draw j, estimate
/// precision with both methods on an independent subsample, then aggregate
/// mean ± std per statistic per size.
pub fn subsample_study(
    samples: &MetricSampleSet,
    config: &SubsampleConfig,
) -> Result<SubsampleReport> {
    let n = samples.len();
    config.validate(n)?;

    let mut rows = Vec::with_capacity(config.sizes.len());
    for &k in &config.sizes {
        let per_draw: Vec<[f64; 7]> = (0..config.draws as u64)
            .into_par_iter()
            .map(|j| -> Result<[f64; 7]> {
                let sub =
                    draw_subsample(samples, k, derive_seed(config.seed, k as u64, j, DRAW_SALT))?;
                let gauss = gaussian_estimate(&sub, config.z, config.convention)?;
                let boot_cfg = BootstrapConfig {
                    resamples: config.bootstrap.resamples,
                    seed: derive_seed(config.bootstrap.seed, k as u64, j, BOOT_SALT),
                    percentile_method: config.bootstrap.percentile_method,
                };
                let boot = bootstrap_estimate(&sub, &boot_cfg)?;
                Ok([
                    gauss.mu,
                    gauss.sigma,
                    gauss.sem,
                    gauss.width,
                    boot.mu_star,
                    boot.sem_star,
                    boot.width_star,
                ])
            })
            .collect::<Result<_>>()?;

        let column = |i: usize| -> Vec<f64> { per_draw.iter().map(|d| d[i]).collect() };
        rows.push(SizeRow {
            k,
            mu: aggregate(&column(0)),
            sigma: aggregate(&column(1)),
            sem: aggregate(&column(2)),
            width: aggregate(&column(3)),
            mu_star: aggregate(&column(4)),
            sem_star: aggregate(&column(5)),
            width_star: aggregate(&column(6)),
        });
    }

    Ok(SubsampleReport {
        rows,
        seed: config.seed,
        draws: config.draws,
        resamples: config.bootstrap.resamples,
        z: config.z,
        convention: config.convention,
    })
}
