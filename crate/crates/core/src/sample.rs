//! Core domain types for per-subject metric samples and the closed-form
//! Gaussian-assumption precision estimates (SEM and 95% CI of the mean).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default critical value for a 95% interval. Kept as the literal constant
/// used throughout the reference tables rather than the exact Normal
/// quantile, so rendered reports reproduce them digit for digit.
pub const Z_95: f64 = 1.96;

/// Exact two-sided 95% Normal quantile, for callers that prefer it over
/// the conventional literal.
pub const Z_95_EXACT: f64 = 1.959_963_984_540_054;

/// One observed metric value for one test subject.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub subject_id: String,
    pub value: f64,
}

impl MetricSample {
    pub fn new(subject_id: impl Into<String>, value: f64) -> Result<Self> {
        let subject_id = subject_id.into();
        if subject_id.is_empty() {
            return Err(Error::InvalidSample("subject_id is empty".into()));
        }
        if !value.is_finite() {
            return Err(Error::InvalidSample(format!(
                "value for subject {subject_id:?} is not finite"
            )));
        }
        Ok(Self { subject_id, value })
    }
}

/// An ordered collection of per-subject metric values; the universe every
/// statistic in this crate is computed over.
///
/// Invariants enforced on construction: at least one sample, unique subject
/// ids, finite values, and (when bounds are declared) every value within
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSampleSet {
    samples: Vec<MetricSample>,
    metric_name: String,
    bounds: Option<(f64, f64)>,
}

impl MetricSampleSet {
    pub fn new(
        samples: Vec<MetricSample>,
        metric_name: impl Into<String>,
        bounds: Option<(f64, f64)>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((lo, hi)) = bounds {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidConfig(format!(
                    "bounds ({lo}, {hi}) must be finite with lo < hi"
                )));
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(samples.len());
        for (row, s) in samples.iter().enumerate() {
            if s.subject_id.is_empty() {
                return Err(Error::InvalidSample(format!(
                    "empty subject_id at row {row}"
                )));
            }
            if !s.value.is_finite() {
                return Err(Error::NonFiniteValue {
                    subject_id: s.subject_id.clone(),
                    row,
                });
            }
            if let Some((lo, hi)) = bounds {
                if s.value < lo || s.value > hi {
                    return Err(Error::OutOfBounds {
                        subject_id: s.subject_id.clone(),
                        value: s.value,
                        lo,
                        hi,
                    });
                }
            }
            if !seen.insert(s.subject_id.as_str()) {
                return Err(Error::DuplicateSubject {
                    subject_id: s.subject_id.clone(),
                    row,
                });
            }
        }
        // HashSet borrows from `samples`; drop it before moving them.
        drop(seen);
        Ok(Self {
            samples,
            metric_name: metric_name.into(),
            bounds,
        })
    }

    /// Build a set from bare values, assigning sequential subject ids.
    pub fn from_values(values: &[f64], metric_name: impl Into<String>) -> Result<Self> {
        let samples = values
            .iter()
            .enumerate()
            .map(|(i, &v)| MetricSample::new(format!("s{:04}", i + 1), v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(samples, metric_name, None)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[MetricSample] {
        &self.samples
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.value)
    }

    pub fn values_vec(&self) -> Vec<f64> {
        self.values().collect()
    }

    pub fn metric_name(&self) -> &str {
        &self.metric_name
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounds
    }

    /// A new set holding the subjects at the given indices, in index order.
    /// Indices must be unique and in range.
    pub(crate) fn select(&self, indices: &[usize]) -> Result<Self> {
        let samples = indices.iter().map(|&i| self.samples[i].clone()).collect();
        Self::new(samples, self.metric_name.clone(), self.bounds)
    }
}

/// Divisor convention for the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadConvention {
    /// Divide the sum of squared deviations by n. This is the crate default,
    /// matching the written definition behind the reference results.
    #[default]
    Population,
    /// Divide by n - 1 (the unbiased variance estimate).
    Sample,
}

impl SpreadConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpreadConvention::Population => "population",
            SpreadConvention::Sample => "sample",
        }
    }
}

/// Empirical mean and standard deviation of a sample set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mu: f64,
    pub sigma: f64,
    pub n: usize,
    pub spread_convention: SpreadConvention,
}

/// Closed-form Gaussian-assumption precision estimate of the mean.
///
/// `sem = sigma / sqrt(n)`, the interval is `mu ± z * sem` and
/// `width = 2 * z * sem` (stored from that expression so the identity holds
/// exactly, not via `ci_hi - ci_lo`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianEstimate {
    pub mu: f64,
    pub sigma: f64,
    pub sem: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub width: f64,
    pub z: f64,
    pub n: usize,
}

impl GaussianEstimate {
    /// Build an estimate directly from known moments.
    pub fn from_moments(mu: f64, sigma: f64, n: usize, z: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegenerateSpread { n });
        }
        if sigma < 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "sigma {sigma} must be finite and >= 0"
            )));
        }
        let sem = sigma / (n as f64).sqrt();
        Ok(Self {
            mu,
            sigma,
            sem,
            ci_lo: mu - z * sem,
            ci_hi: mu + z * sem,
            width: 2.0 * z * sem,
            z,
            n,
        })
    }
}

/// Mean of `values` computed against an anchor so that constant inputs come
/// out exactly (no accumulated representation error), plus the sum of
/// squared deviations from that mean.
///
/// Fixed-order sequential summation: the result is a pure function of the
/// input order, which the determinism contract of the Monte-Carlo modules
/// relies on.
pub(crate) fn mean_and_sq_dev(values: &[f64]) -> (f64, f64) {
    debug_assert!(!values.is_empty());
    let anchor = values[0];
    let shifted_sum: f64 = values.iter().map(|v| v - anchor).sum();
    let mean = anchor + shifted_sum / values.len() as f64;
    let sq_dev: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, sq_dev)
}

/// Standard deviation from a sum of squared deviations under a convention.
pub(crate) fn spread_from_sq_dev(sq_dev: f64, n: usize, convention: SpreadConvention) -> f64 {
    let divisor = match convention {
        SpreadConvention::Population => n as f64,
        SpreadConvention::Sample => (n - 1) as f64,
    };
    (sq_dev / divisor).sqrt()
}

/// Empirical mean and standard deviation of a sample set.
///
/// The population convention (divide by n) is the crate-wide default.
pub fn summarize(samples: &MetricSampleSet, convention: SpreadConvention) -> Result<SummaryStats> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    if n < 2 {
        return Err(Error::DegenerateSpread { n });
    }
    let values = samples.values_vec();
    let (mu, sq_dev) = mean_and_sq_dev(&values);
    Ok(SummaryStats {
        mu,
        sigma: spread_from_sq_dev(sq_dev, n, convention),
        n,
        spread_convention: convention,
    })
}

/// Closed-form SEM and 95% confidence interval of the mean of a sample set.
pub fn gaussian_estimate(
    samples: &MetricSampleSet,
    z: f64,
    convention: SpreadConvention,
) -> Result<GaussianEstimate> {
    let stats = summarize(samples, convention)?;
    GaussianEstimate::from_moments(stats.mu, stats.sigma, stats.n, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(values: &[f64]) -> MetricSampleSet {
        MetricSampleSet::from_values(values, "dice").unwrap()
    }

    #[test]
    fn constant_sample_has_zero_spread() {
        let s = summarize(&set(&[80.0, 80.0, 80.0]), SpreadConvention::Population).unwrap();
        assert_eq!(s.mu, 80.0);
        assert_eq!(s.sigma, 0.0);
    }

    #[test]
    fn two_point_population_spread() {
        let s = summarize(&set(&[0.0, 100.0]), SpreadConvention::Population).unwrap();
        assert_eq!(s.mu, 50.0);
        assert_eq!(s.sigma, 50.0);
    }

    #[test]
    fn sample_convention_uses_n_minus_one() {
        let s = summarize(&set(&[0.0, 100.0]), SpreadConvention::Sample).unwrap();
        assert_eq!(s.sigma, (5000.0f64).sqrt()); // 50 * sqrt(2)
    }

    #[test]
    fn empty_and_degenerate_errors() {
        assert!(matches!(
            MetricSampleSet::new(vec![], "dice", None),
            Err(Error::EmptySample)
        ));
        let one = set(&[42.0]);
        assert!(matches!(
            summarize(&one, SpreadConvention::Population),
            Err(Error::DegenerateSpread { n: 1 })
        ));
        assert!(matches!(
            gaussian_estimate(&one, Z_95, SpreadConvention::Population),
            Err(Error::DegenerateSpread { n: 1 })
        ));
    }

    #[test]
    fn duplicate_subjects_rejected() {
        let samples = vec![
            MetricSample::new("a", 1.0).unwrap(),
            MetricSample::new("a", 2.0).unwrap(),
        ];
        assert!(matches!(
            MetricSampleSet::new(samples, "dice", None),
            Err(Error::DuplicateSubject { .. })
        ));
    }

    #[test]
    fn bounds_enforced() {
        let samples = vec![MetricSample::new("a", 101.0).unwrap()];
        assert!(matches!(
            MetricSampleSet::new(samples, "dice", Some((0.0, 100.0))),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn nonfinite_value_rejected_at_sample_level() {
        assert!(MetricSample::new("a", f64::NAN).is_err());
        assert!(MetricSample::new("a", f64::INFINITY).is_err());
        assert!(MetricSample::new("", 1.0).is_err());
    }

    #[test]
    fn gaussian_estimate_full_set_shape() {
        // mu = 80.70, sigma = 10.75, n = 110 must give SEM 1.02 and width
        // 4.02 once rounded to two decimals.
        let e = GaussianEstimate::from_moments(80.70, 10.75, 110, Z_95).unwrap();
        assert!((e.sem - 1.0249722834390118).abs() < 1e-12);
        assert!((e.width - 4.017891351080927).abs() < 1e-12);
        assert_eq!(e.width, 2.0 * e.z * e.sem);
        assert!((e.ci_hi - e.ci_lo - e.width).abs() < 1e-9);
    }

    #[test]
    fn zero_spread_gives_zero_sem_and_point_interval() {
        let e = gaussian_estimate(&set(&[7.5; 10]), Z_95, SpreadConvention::Population).unwrap();
        assert_eq!(e.sem, 0.0);
        assert_eq!(e.ci_lo, e.mu);
        assert_eq!(e.ci_hi, e.mu);
        assert_eq!(e.width, 0.0);
    }

    #[test]
    fn table3_style_cell() {
        // sigma = 5, n = 100: SEM = 0.5, width = 1.96.
        let e = GaussianEstimate::from_moments(0.0, 5.0, 100, Z_95).unwrap();
        assert_eq!(e.sem, 0.5);
        assert_eq!(e.width, 1.96);
    }

    /// Independent one-pass (Welford) oracle, deliberately a different
    /// algorithm and code path from `mean_and_sq_dev`.
    fn welford(values: &[f64]) -> (f64, f64) {
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (i, &v) in values.iter().enumerate() {
            let delta = v - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (v - mean);
        }
        (mean, (m2 / values.len() as f64).sqrt())
    }

    #[test]
    fn fixture_matches_one_pass_oracle() {
        let raw = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/data/synthetic_dice_110.csv"
        ))
        .unwrap();
        let values: Vec<f64> = raw
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(values.len(), 110);
        let (mu_oracle, sigma_oracle) = welford(&values);
        let s = summarize(&set(&values), SpreadConvention::Population).unwrap();
        assert!((s.mu - mu_oracle).abs() <= 1e-12 * mu_oracle.abs());
        assert!((s.sigma - sigma_oracle).abs() <= 1e-12 * sigma_oracle.abs());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn values_strategy() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-1000.0f64..1000.0, 2..64)
        }

        proptest! {
            #[test]
            fn shift_invariance(values in values_strategy(), c in -500.0f64..500.0) {
                let base = gaussian_estimate(&set(&values), Z_95, SpreadConvention::Population).unwrap();
                let shifted_values: Vec<f64> = values.iter().map(|v| v + c).collect();
                let shifted = gaussian_estimate(&set(&shifted_values), Z_95, SpreadConvention::Population).unwrap();
                let tol = 1e-9 * (1.0 + base.mu.abs() + c.abs());
                prop_assert!((shifted.mu - (base.mu + c)).abs() <= tol);
                prop_assert!((shifted.ci_lo - (base.ci_lo + c)).abs() <= tol);
                prop_assert!((shifted.ci_hi - (base.ci_hi + c)).abs() <= tol);
                prop_assert!((shifted.sigma - base.sigma).abs() <= tol);
                prop_assert!((shifted.sem - base.sem).abs() <= tol);
                prop_assert!((shifted.width - base.width).abs() <= tol);
            }

            #[test]
            fn scale_equivariance(values in values_strategy(), s in 0.01f64..100.0) {
                let base = gaussian_estimate(&set(&values), Z_95, SpreadConvention::Population).unwrap();
                let scaled_values: Vec<f64> = values.iter().map(|v| v * s).collect();
                let scaled = gaussian_estimate(&set(&scaled_values), Z_95, SpreadConvention::Population).unwrap();
                let tol = 1e-9 * s * (1.0 + base.mu.abs() + base.sigma.abs());
                prop_assert!((scaled.mu - base.mu * s).abs() <= tol);
                prop_assert!((scaled.sigma - base.sigma * s).abs() <= tol);
                prop_assert!((scaled.sem - base.sem * s).abs() <= tol);
                prop_assert!((scaled.width - base.width * s).abs() <= tol);
            }

            #[test]
            fn width_identity_exact(values in values_strategy(), z in 0.5f64..4.0) {
                let e = gaussian_estimate(&set(&values), z, SpreadConvention::Population).unwrap();
                prop_assert_eq!(e.width, 2.0 * z * e.sem);
            }

            #[test]
            fn population_spread_never_exceeds_sample_spread(values in values_strategy()) {
                let s = set(&values);
                let pop = summarize(&s, SpreadConvention::Population).unwrap().sigma;
                let samp = summarize(&s, SpreadConvention::Sample).unwrap().sigma;
                prop_assert!(pop <= samp);
                if pop > 0.0 {
                    prop_assert!(pop < samp);
                }
            }

            #[test]
            fn sem_decreases_with_n(sigma in 0.1f64..50.0, n1 in 2usize..500, extra in 1usize..500) {
                let n2 = n1 + extra;
                let e1 = GaussianEstimate::from_moments(0.0, sigma, n1, Z_95).unwrap();
                let e2 = GaussianEstimate::from_moments(0.0, sigma, n2, Z_95).unwrap();
                prop_assert!(e1.sem > e2.sem);
            }
        }
    }
}
