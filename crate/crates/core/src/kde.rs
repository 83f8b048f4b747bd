//! Gaussian-kernel density estimation of the metric distribution, producing
//! plot-ready curve data.

use crate::bootstrap::{percentile, PercentileMethod};
use crate::error::{Error, Result};
use crate::sample::{mean_and_sq_dev, MetricSampleSet};

/// Default number of evaluation points.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// A sampled density curve. The grid spans
/// `[min - 4 * bandwidth, max + 4 * bandwidth]`, wide enough that the
/// trapezoidal integral of the density is 1 up to truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct KdeCurve {
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    pub bandwidth: f64,
}

impl KdeCurve {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, d)| (x[1] - x[0]) * (d[0] + d[1]) / 2.0)
            .sum()
    }
}

/// Silverman's rule of thumb: `0.9 * min(sample sigma, IQR / 1.34) * n^(-1/5)`,
/// with sigma the n-1 convention spread and the IQR from interpolated
/// quartiles. A zero candidate (e.g. a majority of tied values collapsing
/// the IQR) is ignored in the min; if both candidates are zero the sample
/// carries no usable spread.
pub fn silverman_bandwidth(samples: &MetricSampleSet) -> Result<f64> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::DegenerateSpread { n });
    }
    let values = samples.values_vec();
    let (_, sq_dev) = mean_and_sq_dev(&values);
    let sigma = (sq_dev / (n - 1) as f64).sqrt();

    let mut sorted = values;
    sorted.sort_by(f64::total_cmp);
    let iqr = percentile(&sorted, 0.75, PercentileMethod::LinearInterpolation)?
        - percentile(&sorted, 0.25, PercentileMethod::LinearInterpolation)?;

    let spread = match (sigma > 0.0, iqr > 0.0) {
        (true, true) => sigma.min(iqr / 1.34),
        (true, false) => sigma,
        (false, true) => iqr / 1.34,
        (false, false) => return Err(Error::DegenerateSpread { n }),
    };
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// Gaussian-kernel density estimate on an even grid.
///
/// When `bandwidth` is `None`, Silverman's rule is used; the chosen value is
/// recorded on the returned curve so plots are reproducible.
pub fn kde(
    samples: &MetricSampleSet,
    bandwidth: Option<f64>,
    grid_points: usize,
) -> Result<KdeCurve> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::DegenerateSpread { n });
    }
    if grid_points < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid_points {grid_points} must be >= 2"
        )));
    }
    let h = match bandwidth {
        Some(h) if h.is_finite() && h > 0.0 => h,
        Some(h) => {
            return Err(Error::InvalidConfig(format!(
                "bandwidth {h} must be finite and > 0"
            )))
        }
        None => silverman_bandwidth(samples)?,
    };

    let values = samples.values_vec();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = min - 4.0 * h;
    let hi = max + 4.0 * h;
    let step = (hi - lo) / (grid_points - 1) as f64;

    let norm = 1.0 / (n as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    let grid: Vec<f64> = (0..grid_points).map(|i| lo + i as f64 * step).collect();
    let density = grid
        .iter()
        .map(|&x| {
            let sum: f64 = values
                .iter()
                .map(|&v| {
                    let u = (x - v) / h;
                    (-0.5 * u * u).exp()
                })
                .sum();
            norm * sum
        })
        .collect();
    Ok(KdeCurve {
        grid,
        density,
        bandwidth: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(values: &[f64]) -> MetricSampleSet {
        MetricSampleSet::from_values(values, "dice").unwrap()
    }

    #[test]
    fn mass_sits_at_the_cluster() {
        let s = set(&[79.9, 80.0, 80.1, 80.05, 79.95]);
        let curve = kde(&s, None, DEFAULT_GRID_POINTS).unwrap();
        let (mode_idx, _) = curve
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!((curve.grid[mode_idx] - 80.0).abs() <= curve.bandwidth);
    }

    #[test]
    fn two_equal_clusters_are_symmetric() {
        let s = set(&[0.0, 0.0, 0.0, 100.0, 100.0, 100.0]);
        let curve = kde(&s, Some(5.0), 512).unwrap();
        let m = curve.grid.len();
        for i in 0..m / 2 {
            let a = curve.density[i];
            let b = curve.density[m - 1 - i];
            assert!((a - b).abs() <= 1e-6, "i={i}: {a} vs {b}");
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let s = crate::synthetic::normal_samples(110, 80.7, 10.75, 4).unwrap();
        let curve = kde(&s, None, DEFAULT_GRID_POINTS).unwrap();
        let integral = curve.integral();
        assert!((0.98..=1.02).contains(&integral), "integral {integral}");
        assert!(curve.density.iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn degenerate_inputs_rejected() {
        assert!(matches!(
            kde(&set(&[5.0, 5.0, 5.0]), None, 64),
            Err(Error::DegenerateSpread { .. })
        ));
        assert!(matches!(
            kde(&set(&[5.0]), None, 64),
            Err(Error::DegenerateSpread { n: 1 })
        ));
        assert!(matches!(
            kde(&set(&[1.0, 2.0]), Some(0.0), 64),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            kde(&set(&[1.0, 2.0]), Some(-1.0), 64),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            kde(&set(&[1.0, 2.0]), None, 1),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn constant_sample_with_explicit_bandwidth_is_fine() {
        let curve = kde(&set(&[5.0, 5.0, 5.0]), Some(2.0), 256).unwrap();
        assert_eq!(curve.bandwidth, 2.0);
        let integral = curve.integral();
        assert!((0.98..=1.02).contains(&integral));
    }

    #[test]
    fn silverman_ignores_collapsed_iqr() {
        // more than half the values tied: IQR = 0, sigma > 0
        let s = set(&[10.0, 10.0, 10.0, 10.0, 10.0, 10.0, 50.0]);
        let h = silverman_bandwidth(&s).unwrap();
        assert!(h > 0.0);
    }

    #[test]
    fn grid_spans_four_bandwidths() {
        let s = set(&[0.0, 100.0]);
        let curve = kde(&s, Some(5.0), 101).unwrap();
        assert_eq!(curve.grid[0], -20.0);
        assert_eq!(*curve.grid.last().unwrap(), 120.0);
    }
}
