//! Analytic simulation of SEM and CI width over a (k, sigma) grid, and the
//! inverse problem: the minimal test-set size needed for a target CI width.
//!
//! Everything here is closed form; the mean plays no role in either
//! direction.

use crate::error::{Error, Result};
use crate::sample::Z_95;

/// Default test-set sizes of the simulation grid.
pub const DEFAULT_GRID_SIZES: [usize; 9] = [10, 20, 30, 50, 100, 200, 300, 500, 1000];

/// Default spread axis of the simulation grid.
pub const DEFAULT_GRID_SIGMAS: [f64; 7] = [2.0, 5.0, 8.0, 10.75, 12.0, 15.0, 18.0];

/// One grid cell: SEM and 95% CI width for a (k, sigma) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub sem: f64,
    pub width: f64,
}

/// SEM/width surface over test-set sizes (rows) and spreads (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationGrid {
    pub k_values: Vec<usize>,
    pub sigma_values: Vec<f64>,
    /// `cells[i][j]` belongs to `(k_values[i], sigma_values[j])`.
    pub cells: Vec<Vec<GridCell>>,
    pub z: f64,
}

impl SimulationGrid {
    pub fn cell(&self, i: usize, j: usize) -> GridCell {
        self.cells[i][j]
    }
}

/// The one width expression used everywhere in this module. The planner
/// judges candidate sizes with the very same floating-point formula the
/// grid fills cells with, so grid-to-planner round trips are exact.
fn width_for(sigma: f64, n: usize, z: f64) -> f64 {
    2.0 * z * (sigma / (n as f64).sqrt())
}

/// Populate a grid with `sem = sigma / sqrt(k)` and `width = 2 z sem`.
pub fn simulate_grid(k_values: &[usize], sigma_values: &[f64], z: f64) -> Result<SimulationGrid> {
    for &k in k_values {
        if k < 1 {
            return Err(Error::InvalidGridAxis(format!(
                "test-set size {k} must be >= 1"
            )));
        }
    }
    for &sigma in sigma_values {
        if sigma <= 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidGridAxis(format!("sigma {sigma} must be > 0")));
        }
    }
    if z <= 0.0 || !z.is_finite() {
        return Err(Error::InvalidGridAxis(format!("z {z} must be > 0")));
    }
    let cells = k_values
        .iter()
        .map(|&k| {
            sigma_values
                .iter()
                .map(|&sigma| GridCell {
                    sem: sigma / (k as f64).sqrt(),
                    width: width_for(sigma, k, z),
                })
                .collect()
        })
        .collect();
    Ok(SimulationGrid {
        k_values: k_values.to_vec(),
        sigma_values: sigma_values.to_vec(),
        cells,
        z,
    })
}

/// The grid over [`DEFAULT_GRID_SIZES`] and [`DEFAULT_GRID_SIGMAS`] at
/// z = 1.96.
pub fn default_grid() -> SimulationGrid {
    simulate_grid(&DEFAULT_GRID_SIZES, &DEFAULT_GRID_SIGMAS, Z_95).expect("default axes are valid")
}

/// Result of the test-set-size planner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanResult {
    /// Minimal n with `2 z sigma / sqrt(n) <= target_width`.
    pub required_n: usize,
    pub sigma: f64,
    pub target_width: f64,
    pub z: f64,
    /// The width actually achieved at `required_n`.
    pub achieved_width: f64,
}

/// Minimal integer test-set size whose 95% CI width does not exceed
/// `target_width`, by inverting `width = 2 z sigma / sqrt(n)`.
pub fn plan_sample_size(sigma: f64, target_width: f64, z: f64) -> Result<PlanResult> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::InvalidTarget(format!("sigma {sigma} must be > 0")));
    }
    if target_width <= 0.0 || !target_width.is_finite() {
        return Err(Error::InvalidTarget(format!(
            "target width {target_width} must be > 0"
        )));
    }
    if z <= 0.0 || !z.is_finite() {
        return Err(Error::InvalidTarget(format!("z {z} must be > 0")));
    }
    let width_at = |n: usize| width_for(sigma, n, z);
    // Algebraic start, then settle minimality with the exact same
    // floating-point expression the result is judged by, so round-off in
    // the square cannot shift the answer by one.
    let mut n = ((2.0 * z * sigma / target_width).powi(2)).ceil().max(1.0) as usize;
    while n > 1 && width_at(n - 1) <= target_width {
        n -= 1;
    }
    while width_at(n) > target_width {
        n += 1;
    }
    Ok(PlanResult {
        required_n: n,
        sigma,
        target_width,
        z,
        achieved_width: width_at(n),
    })
}
