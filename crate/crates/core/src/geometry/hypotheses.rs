use serde::Serialize;

use super::{Gauge, RadialMetric};
use crate::error::Result;
use crate::numerics::{try_find_root, ToleranceConfig};

/// Scalar curvature counts as negative below `-CURVATURE_SLACK / A²`.
const CURVATURE_SLACK: f64 = 1e-8;

const ISOPERIMETRIC_NOTE: &str = "radial estimate: minimum of area^3/volume^2 over centered coordinate spheres only";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureViolation {
    pub rho: f64,
    pub value: f64,
}

/// Grid-based certificate for the hypotheses of the mass equivalence:
/// nonnegative scalar curvature, no minimal spheres besides the boundary,
/// a minimal (or absent) boundary, and a Euclidean-type isoperimetric
/// constant among centered spheres.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub scalar_curvature_nonneg: bool,
    /// Most negative scalar curvature found, if any point is flagged.
    pub worst_violation: Option<CurvatureViolation>,
    pub negative_points: usize,
    /// Grid points where a min/max tie makes the curvature one-sided; they
    /// are excluded from the curvature verdict.
    pub non_smooth_points: usize,
    pub no_interior_minimal: bool,
    pub interior_minimal_radii: Vec<f64>,
    pub minimal_boundary: bool,
    pub radial_isoperimetric_constant: f64,
    pub isoperimetric_minimizer: f64,
    pub isoperimetric_note: &'static str,
    pub probe_per_decade: usize,
    pub probe_grid: Vec<f64>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.scalar_curvature_nonneg && self.no_interior_minimal && self.minimal_boundary
    }
}

/// `a′` or `f`: has the sign of the mean curvature.
fn curvature_sign(metric: &RadialMetric, x: f64) -> Result<f64> {
    let e = metric.profile_at(x)?;
    Ok(match metric.gauge() {
        Gauge::Geodesic => e.d1,
        Gauge::Areal => e.value,
    })
}

/// Radii of the minimal coordinate spheres on the probe grid: the domain
/// start when its mean curvature vanishes, every sign change of `H`
/// refined by root finding, and the first point of every run of grid points
/// where `H` vanishes to within `root_tol` without changing sign.
pub fn find_minimal_spheres(metric: &RadialMetric, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    let grid = metric.probe_grid(cfg)?;
    let start = metric.domain_start();
    let mut roots = Vec::new();
    let mut prev = curvature_sign(metric, start)?;
    let start_is_center = metric.areal_radius(start)? == 0.0;
    if prev.abs() <= cfg.root_tol && !start_is_center {
        roots.push(start);
    }
    let mut in_flat_run = false;
    for w in grid.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let next = curvature_sign(metric, x1)?;
        if next.abs() <= cfg.root_tol {
            if !in_flat_run {
                roots.push(x1);
            }
            in_flat_run = true;
        } else {
            if prev.abs() > cfg.root_tol && prev.signum() != next.signum() {
                roots.push(try_find_root(|x| curvature_sign(metric, x), x0, x1, cfg)?);
            }
            in_flat_run = false;
        }
        prev = next;
    }
    Ok(roots)
}

pub fn check_hypotheses(metric: &RadialMetric, cfg: &ToleranceConfig) -> Result<HypothesisReport> {
    let grid = metric.probe_grid(cfg)?;
    let start = metric.domain_start();

    let mut worst: Option<CurvatureViolation> = None;
    let mut negative_points = 0;
    let mut non_smooth_points = 0;
    let mut kappa = f64::INFINITY;
    let mut kappa_at = f64::NAN;
    let mut volume = 0.0;
    for (i, &x) in grid.iter().enumerate() {
        if i > 0 {
            volume += metric.volume_between(grid[i - 1], x, cfg)?;
        }
        let local = metric.local(x)?;
        let a = local.radius;
        if !(a > 0.0) {
            continue;
        }
        if local.non_smooth {
            non_smooth_points += 1;
        } else if local.scalar_curvature * a * a < -CURVATURE_SLACK {
            negative_points += 1;
            if worst.is_none_or(|w| local.scalar_curvature < w.value) {
                worst = Some(CurvatureViolation { rho: x, value: local.scalar_curvature });
            }
        }
        if volume > 0.0 {
            let area = 4.0 * std::f64::consts::PI * a * a;
            let k = area.powi(3) / (volume * volume);
            if k < kappa {
                kappa = k;
                kappa_at = x;
            }
        }
    }

    let minimal = find_minimal_spheres(metric, cfg)?;
    let interior: Vec<f64> = minimal.iter().copied().filter(|&x| x > start).collect();
    let minimal_boundary = metric.areal_radius(start)? == 0.0 || minimal.first() == Some(&start);

    Ok(HypothesisReport {
        scalar_curvature_nonneg: negative_points == 0,
        worst_violation: worst,
        negative_points,
        non_smooth_points,
        no_interior_minimal: interior.is_empty(),
        interior_minimal_radii: interior,
        minimal_boundary,
        radial_isoperimetric_constant: if kappa.is_finite() { kappa } else { 0.0 },
        isoperimetric_minimizer: kappa_at,
        isoperimetric_note: ISOPERIMETRIC_NOTE,
        probe_per_decade: cfg.probe_per_decade,
        probe_grid: grid,
    })
}
