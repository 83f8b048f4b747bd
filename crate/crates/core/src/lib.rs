//! Precision estimation for per-sample evaluation metrics.
//!
//! A model's reported score (say, mean Dice over a test set) is an
//! estimate, and its precision depends on the spread of per-subject values
//! and on the test-set size. This crate quantifies that precision:
//!
//! * [`sample`] — sample-set types and closed-form Gaussian estimates
//!   (`sem = sigma / sqrt(n)`, 95% interval `mu ± 1.96 sem`);
//! * [`bootstrap`] — percentile-bootstrap estimates of the same
//!   quantities, with an exact enumeration oracle for tiny samples;
//! * [`subsample`] — the empirical study of how precision degrades on
//!   smaller test sets, by repeated without-replacement draws;
//! * [`simulate`] — the analytic SEM/width surface over (size, spread)
//!   and the inverse planner for a target CI width;
//! * [`metrics`] / [`volume`] — Dice on binary masks, label merging and
//!   the `.jvol` volume container;
//! * [`io`] / [`render`] / [`mod@kde`] — sample file ingestion, report
//!   rendering and density-curve export;
//! * [`synthetic`] — seeded generators used by tests, benchmarks and
//!   fixtures.
//!
//! # Reproducibility
//!
//! Every randomized computation is a pure function of its inputs and a
//! 64-bit seed. Randomness comes from ChaCha8 streams keyed per work unit
//! (resample index, or a splitmix64-derived per-draw seed), so results are
//! bitwise identical across thread counts, platforms and runs.
//!
//! # Example
//!
//! ```
//! use evalprec_core::{
//!     bootstrap_estimate, gaussian_estimate, BootstrapConfig, MetricSampleSet,
//!     SpreadConvention, Z_95,
//! };
//!
//! let dice = [78.3, 92.1, 85.4, 88.0, 74.9, 90.2, 81.7, 86.5, 79.8, 84.1];
//! let samples = MetricSampleSet::from_values(&dice, "dice")?;
//!
//! let gauss = gaussian_estimate(&samples, Z_95, SpreadConvention::Population)?;
//! assert_eq!(gauss.width, 2.0 * gauss.z * gauss.sem);
//!
//! let config = BootstrapConfig { resamples: 4000, seed: 7, ..Default::default() };
//! let boot = bootstrap_estimate(&samples, &config)?;
//! assert!((boot.sem_star - gauss.sem).abs() < 0.5);
//! # Ok::<(), evalprec_core::Error>(())
//! ```

pub mod bootstrap;
pub mod error;
pub mod io;
pub mod kde;
pub mod metrics;
pub mod render;
pub mod sample;
pub mod simulate;
pub mod subsample;
pub mod synthetic;
pub mod volume;

pub use bootstrap::{
    bootstrap_estimate, exhaustive_bootstrap, percentile, resample_means, BootstrapConfig,
    BootstrapEstimate, PercentileMethod, DEFAULT_RESAMPLES,
};
pub use error::{Error, ErrorCategory, Result};
pub use io::{load_samples, load_samples_with, save_samples, LoadOptions, SampleFormat};
pub use kde::{kde, silverman_bandwidth, KdeCurve};
pub use metrics::{dice, merge_labels, BinaryMask, LabelVolume};
pub use render::{kde_csv, render_report, Report, ReportFormat};
pub use sample::{
    gaussian_estimate, summarize, GaussianEstimate, MetricSample, MetricSampleSet,
    SpreadConvention, SummaryStats, Z_95, Z_95_EXACT,
};
pub use simulate::{
    default_grid, plan_sample_size, simulate_grid, PlanResult, SimulationGrid, DEFAULT_GRID_SIGMAS,
    DEFAULT_GRID_SIZES,
};
pub use subsample::{
    default_sizes, draw_subsample, subsample_study, SubsampleConfig, SubsampleReport,
};
pub use volume::{read_volume, write_volume};
