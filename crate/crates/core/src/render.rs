//! Rendering of estimates, study reports and simulation grids as markdown
//! or CSV text.
//!
//! All statistics are computed and stored in full double precision;
//! rounding to two decimals (half away from zero) happens here and only
//! here. Rendering is pure: the same input always yields byte-identical
//! text.

use crate::bootstrap::BootstrapEstimate;
use crate::kde::KdeCurve;
use crate::sample::GaussianEstimate;
use crate::simulate::{PlanResult, SimulationGrid};
use crate::subsample::{Aggregate, SubsampleReport};

/// Text output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl ReportFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReportFormat::Markdown => "markdown",
            ReportFormat::Csv => "csv",
        }
    }
}

/// Anything the renderer knows how to lay out.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Gaussian(&'a GaussianEstimate),
    Bootstrap(&'a BootstrapEstimate),
    /// Gaussian and bootstrap estimates of the same sample set, as one
    /// full-test-set row.
    FullSet(&'a GaussianEstimate, &'a BootstrapEstimate),
    Subsample(&'a SubsampleReport),
    Grid(&'a SimulationGrid),
    Plan(&'a PlanResult),
}

/// Round to two decimals, half away from zero.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Fixed two-decimal rendering of `x` after [`round2`].
pub fn format2(x: f64) -> String {
    let cents = (x * 100.0).round() as i128;
    let sign = if cents < 0 { "-" } else { "" };
    let cents = cents.unsigned_abs();
    format!("{sign}{}.{:02}", cents / 100, cents % 100)
}

/// Minimal decimal rendering of an axis label (no trailing zeros).
fn axis_label(x: f64) -> String {
    format!("{x}")
}

fn pm(a: &Aggregate) -> String {
    format!("{} ± {}", format2(a.mean), format2(a.std))
}

/// Render a report in the requested format.
pub fn render_report(report: &Report, format: ReportFormat) -> String {
    match (report, format) {
        (Report::Gaussian(e), ReportFormat::Csv) => {
            format!(
                "mu,sigma,sem,width\n{},{},{},{}\n",
                format2(e.mu),
                format2(e.sigma),
                format2(e.sem),
                format2(e.width)
            )
        }
        (Report::Gaussian(e), ReportFormat::Markdown) => {
            let mut out = String::new();
            out.push_str("| mu | sigma | sem | width |\n|---|---|---|---|\n");
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                format2(e.mu),
                format2(e.sigma),
                format2(e.sem),
                format2(e.width)
            ));
            out
        }
        (Report::Bootstrap(e), ReportFormat::Csv) => {
            format!(
                "mu_star,sem_star,width_star\n{},{},{}\n",
                format2(e.mu_star),
                format2(e.sem_star),
                format2(e.width_star)
            )
        }
        (Report::Bootstrap(e), ReportFormat::Markdown) => {
            let mut out = String::new();
            out.push_str("| mu* | sem* | width* |\n|---|---|---|\n");
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                format2(e.mu_star),
                format2(e.sem_star),
                format2(e.width_star)
            ));
            out
        }
        (Report::FullSet(g, b), ReportFormat::Csv) => {
            format!(
                "n,mu,sigma,sem,width,mu_star,sem_star,width_star\n{},{},{},{},{},{},{},{}\n",
                g.n,
                format2(g.mu),
                format2(g.sigma),
                format2(g.sem),
                format2(g.width),
                format2(b.mu_star),
                format2(b.sem_star),
                format2(b.width_star)
            )
        }
        (Report::FullSet(g, b), ReportFormat::Markdown) => {
            let mut out = String::new();
            out.push_str("| n | mu | sigma | sem | width | mu* | sem* | width* |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                g.n,
                format2(g.mu),
                format2(g.sigma),
                format2(g.sem),
                format2(g.width),
                format2(b.mu_star),
                format2(b.sem_star),
                format2(b.width_star)
            ));
            out
        }
        (Report::Subsample(r), ReportFormat::Csv) => {
            let mut out = String::from(
                "k,mu_mean,mu_std,sigma_mean,sigma_std,sem_mean,sem_std,width_mean,width_std,\
                 mu_star_mean,mu_star_std,sem_star_mean,sem_star_std,width_star_mean,width_star_std\n",
            );
            for row in &r.rows {
                let cols = [
                    row.mu,
                    row.sigma,
                    row.sem,
                    row.width,
                    row.mu_star,
                    row.sem_star,
                    row.width_star,
                ];
                out.push_str(&row.k.to_string());
                for a in cols {
                    out.push_str(&format!(",{},{}", format2(a.mean), format2(a.std)));
                }
                out.push('\n');
            }
            out
        }
        (Report::Subsample(r), ReportFormat::Markdown) => {
            let mut out = String::new();
            out.push_str("| k | mu | sigma | sem | width | mu* | sem* | width* |\n");
            out.push_str("|---|---|---|---|---|---|---|---|\n");
            for row in &r.rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} | {} | {} |\n",
                    row.k,
                    pm(&row.mu),
                    pm(&row.sigma),
                    pm(&row.sem),
                    pm(&row.width),
                    pm(&row.mu_star),
                    pm(&row.sem_star),
                    pm(&row.width_star)
                ));
            }
            out
        }
        (Report::Grid(g), ReportFormat::Csv) => {
            let mut out = String::from("k");
            for sigma in &g.sigma_values {
                let label = axis_label(*sigma);
                out.push_str(&format!(",sem_{label},width_{label}"));
            }
            out.push('\n');
            for (i, k) in g.k_values.iter().enumerate() {
                out.push_str(&k.to_string());
                for j in 0..g.sigma_values.len() {
                    let cell = g.cell(i, j);
                    out.push_str(&format!(",{},{}", format2(cell.sem), format2(cell.width)));
                }
                out.push('\n');
            }
            out
        }
        (Report::Grid(g), ReportFormat::Markdown) => {
            let mut out = String::from("| k |");
            for sigma in &g.sigma_values {
                let label = axis_label(*sigma);
                out.push_str(&format!(" sem (σ={label}) | width (σ={label}) |"));
            }
            out.push('\n');
            out.push_str("|---|");
            for _ in &g.sigma_values {
                out.push_str("---|---|");
            }
            out.push('\n');
            for (i, k) in g.k_values.iter().enumerate() {
                out.push_str(&format!("| {k} |"));
                for j in 0..g.sigma_values.len() {
                    let cell = g.cell(i, j);
                    out.push_str(&format!(
                        " {} | {} |",
                        format2(cell.sem),
                        format2(cell.width)
                    ));
                }
                out.push('\n');
            }
            out
        }
        (Report::Plan(p), ReportFormat::Csv) => {
            format!(
                "sigma,target_width,z,required_n,achieved_width\n{},{},{},{},{}\n",
                axis_label(p.sigma),
                axis_label(p.target_width),
                axis_label(p.z),
                p.required_n,
                format2(p.achieved_width)
            )
        }
        (Report::Plan(p), ReportFormat::Markdown) => {
            let mut out = String::new();
            out.push_str("| sigma | target_width | z | required_n | achieved_width |\n");
            out.push_str("|---|---|---|---|---|\n");
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} |\n",
                axis_label(p.sigma),
                axis_label(p.target_width),
                axis_label(p.z),
                p.required_n,
                format2(p.achieved_width)
            ));
            out
        }
    }
}

/// CSV export of a density curve. Unlike the 2-decimal report tables, curve
/// data keeps full precision; the bandwidth is recorded so the plot can be
/// reproduced.
pub fn kde_csv(curve: &KdeCurve) -> String {
    let mut out = format!("# bandwidth = {}\nx,density\n", curve.bandwidth);
    for (x, d) in curve.grid.iter().zip(&curve.density) {
        out.push_str(&format!("{x},{d}\n"));
    }
    out
}
