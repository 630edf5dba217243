//! Quasilocal masses of coordinate spheres and their limits along sphere
//! exhaustions.
//!
//! Total masses are limits over coordinate spheres only. Any exhaustion
//! gives a lower bound for the supremum over all exhaustions, so a reported
//! total mass is a lower bound unless coordinate spheres happen to be
//! optimal.

mod bounds;
mod report;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{one_capacity, p_capacity, P_MAX};
use crate::error::{Error, Result};
use crate::geometry::{sphere_data, RadialMetric};
use crate::numerics::{extrapolate_limit, ToleranceConfig};

pub use bounds::{
    asymptotic_isoperimetric_check, capacity_bound_check, CapacityBoundReport, IsoperimetricReport, IsoperimetricRow,
};

/// Stands in for `+∞` whenever a mass diverges.
pub const DIVERGENT_MASS: f64 = f64::MAX;

pub const EXHAUSTION_NOTE: &str =
    "total mass taken over coordinate-sphere exhaustions only; it bounds the supremum over all exhaustions from below";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasilocalMass {
    /// The mass, or [`DIVERGENT_MASS`] when the metric is p-parabolic.
    pub value: f64,
    pub divergent: bool,
}

impl QuasilocalMass {
    fn finite(value: f64) -> Self {
        Self { value, divergent: false }
    }

    fn infinite() -> Self {
        Self { value: DIVERGENT_MASS, divergent: true }
    }
}

fn check_mass_exponent(p: f64) -> Result<()> {
    if p == 1.0 || (p > 1.0 && p <= P_MAX) {
        Ok(())
    } else {
        Err(Error::BadExponent(p))
    }
}

/// The iso-p-capacitary mass of the ball bounded by the sphere at `rho`:
/// the volume excess over a Euclidean ball of equal normalized p-capacity,
/// `(|Ω| − (4π/3)·ncap^{3/(3−p)}) / (2πp·ncap^{2/(3−p)})`.
pub fn quasilocal_mass(metric: &RadialMetric, rho: f64, p: f64, cfg: &ToleranceConfig) -> Result<QuasilocalMass> {
    check_mass_exponent(p)?;
    let cap = if p == 1.0 {
        match one_capacity(metric, rho, cfg) {
            // Without growing area there is no outermost least-area sphere.
            Err(Error::NotAsymptoticallyLarge(_)) => return Ok(QuasilocalMass::infinite()),
            other => other?,
        }
    } else {
        p_capacity(metric, rho, p, cfg)?
    };
    if cap.parabolic {
        return Ok(QuasilocalMass::infinite());
    }
    let volume = metric.volume(rho, cfg)?;
    let radius = cap.ncap.powf(1.0 / (3.0 - p));
    Ok(QuasilocalMass::finite((volume - 4.0 * PI / 3.0 * radius.powi(3)) / (2.0 * PI * p * radius * radius)))
}

/// Huisken's quasilocal isoperimetric mass `(2/|∂Ω|)(|Ω| − |∂Ω|^{3/2}/(6√π))`.
pub fn huisken_mass(metric: &RadialMetric, rho: f64, cfg: &ToleranceConfig) -> Result<f64> {
    let s = sphere_data(metric, rho, cfg)?;
    Ok(2.0 / s.area * (s.volume - s.area.powf(1.5) / (6.0 * PI.sqrt())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Converged,
    Divergent,
    Indeterminate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Converged => "CONVERGED",
            Verdict::Divergent => "DIVERGENT",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassReport {
    pub metric: String,
    /// `None` for Huisken's isoperimetric mass.
    pub p: Option<f64>,
    pub radii: Vec<f64>,
    pub quasilocal: Vec<f64>,
    pub extrapolated: f64,
    pub err: f64,
    pub verdict: Verdict,
    pub note: &'static str,
}

fn check_grid(r_grid: &[f64], cfg: &ToleranceConfig) -> Result<()> {
    if r_grid.len() < cfg.extrap_terms {
        return Err(Error::InsufficientData { needed: cfg.extrap_terms, got: r_grid.len() });
    }
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("radius grid must be strictly increasing".into()));
    }
    Ok(())
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn assemble(
    metric: &RadialMetric,
    p: Option<f64>,
    radii: &[f64],
    masses: Vec<QuasilocalMass>,
    cfg: &ToleranceConfig,
) -> Result<MassReport> {
    let quasilocal: Vec<f64> = masses.iter().map(|m| m.value).collect();
    let mut report = MassReport {
        metric: metric.label().to_string(),
        p,
        radii: radii.to_vec(),
        quasilocal,
        extrapolated: DIVERGENT_MASS,
        err: DIVERGENT_MASS,
        verdict: Verdict::Divergent,
        note: EXHAUSTION_NOTE,
    };
    if masses.iter().any(|m| m.divergent) {
        return Ok(report);
    }
    let values = &report.quasilocal;
    let last = values[values.len() - 1];
    let reference = median(&values[values.len() / 2..]).abs().max(cfg.report_tol);
    let n = values.len();
    let (d_prev, d_last) = ((values[n - 2] - values[n - 3]).abs(), (last - values[n - 2]).abs());
    let not_contracting = d_last >= d_prev && d_last > cfg.report_tol * last.abs().max(1.0);
    if last.abs() > 10.0 * reference || not_contracting {
        report.extrapolated = last;
        report.err = (last - values[values.len() - 2]).abs();
        return Ok(report);
    }
    let seq: Vec<(f64, f64)> = radii.iter().copied().zip(values.iter().copied()).collect();
    let ex = extrapolate_limit(&seq, cfg)?;
    report.extrapolated = ex.limit;
    report.err = ex.err_estimate;
    report.verdict = if !ex.diverged && ex.err_estimate <= cfg.report_tol * ex.limit.abs().max(1.0) {
        Verdict::Converged
    } else {
        Verdict::Indeterminate
    };
    Ok(report)
}

/// Iso-p-capacitary masses on `r_grid` and their extrapolated limit.
pub fn total_mass(metric: &RadialMetric, p: f64, r_grid: &[f64], cfg: &ToleranceConfig) -> Result<MassReport> {
    check_mass_exponent(p)?;
    check_grid(r_grid, cfg)?;
    let masses = r_grid.iter().map(|&r| quasilocal_mass(metric, r, p, cfg)).collect::<Result<Vec<_>>>()?;
    assemble(metric, Some(p), r_grid, masses, cfg)
}

/// Huisken masses on `r_grid` and their extrapolated limit.
pub fn total_huisken_mass(metric: &RadialMetric, r_grid: &[f64], cfg: &ToleranceConfig) -> Result<MassReport> {
    check_grid(r_grid, cfg)?;
    // A metric whose area stays bounded has no finite isoperimetric mass.
    if metric.check_largeness(cfg).is_err() {
        let masses = vec![QuasilocalMass::infinite(); r_grid.len()];
        return assemble(metric, None, r_grid, masses, cfg);
    }
    let masses =
        r_grid.iter().map(|&r| huisken_mass(metric, r, cfg).map(QuasilocalMass::finite)).collect::<Result<Vec<_>>>()?;
    assemble(metric, None, r_grid, masses, cfg)
}

/// Geometric radius grid with ratio 2 starting at 50 capacitary radii of
/// the innermost sphere (its areal radius when it has no hull), `extrap_terms`
/// entries long.
pub fn default_radius_grid(metric: &RadialMetric, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    let start = metric.domain_start();
    let radius = match one_capacity(metric, start, cfg) {
        Ok(c) => c.ncap.sqrt(),
        Err(Error::NotAsymptoticallyLarge(_)) => metric.areal_radius(start)?,
        Err(e) => return Err(e),
    }
    .max(1.0);
    Ok((0..cfg.extrap_terms).map(|k| start + 50.0 * radius * 2f64.powi(k as i32)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceVerdict {
    pub p_grid: Vec<f64>,
    pub masses: Vec<MassReport>,
    pub huisken: MassReport,
    pub max_pairwise_gap: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Total iso-p-capacitary masses over `p_grid` together with the Huisken
/// mass; passes when every limit is finite and all agree within `tol`.
pub fn equivalence_report(
    metric: &RadialMetric,
    p_grid: &[f64],
    r_grid: &[f64],
    tol: f64,
    cfg: &ToleranceConfig,
) -> Result<EquivalenceVerdict> {
    let masses = p_grid.par_iter().map(|&p| total_mass(metric, p, r_grid, cfg)).collect::<Result<Vec<_>>>()?;
    let huisken = total_huisken_mass(metric, r_grid, cfg)?;
    let all: Vec<&MassReport> = masses.iter().chain(std::iter::once(&huisken)).collect();
    let divergent = all.iter().any(|m| m.verdict == Verdict::Divergent);
    let max_pairwise_gap = if divergent {
        DIVERGENT_MASS
    } else {
        let hi = all.iter().map(|m| m.extrapolated).fold(f64::NEG_INFINITY, f64::max);
        let lo = all.iter().map(|m| m.extrapolated).fold(f64::INFINITY, f64::min);
        hi - lo
    };
    Ok(EquivalenceVerdict {
        p_grid: p_grid.to_vec(),
        masses,
        huisken,
        max_pairwise_gap,
        tol,
        pass: !divergent && max_pairwise_gap <= tol,
    })
}

#[cfg(test)]
mod tests;
