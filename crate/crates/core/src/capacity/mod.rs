//! Normalized p-capacities of centered spheres and the radial p-capacitary
//! potential.
//!
//! For `1 < p < 3` the capacity of the sphere at `ρ0` is computed from the
//! radial minimizer of the p-energy, which depends only on
//!
//! ```text
//! I_p(ρ0) = ∫_{ρ0}^∞ (4π A(s)²)^{-1/(p-1)} ds      (ds = arclength)
//! ```
//!
//! through `Φ = I_p^{-(p-1)}` and `ncap = (1/4π)·((p−1)/(3−p))^{p−1}·Φ`,
//! which is normalized so that a Euclidean ball of radius `r` has capacity
//! `r^{3−p}`. Symmetric potentials are assumed to be optimal; the value
//! returned is the infimum over radial competitors. For `p = 1` the
//! capacity is the least area of a sphere enclosing the given one.

mod holder;
mod integral;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::outward_hull;
use crate::geometry::RadialMetric;
use crate::numerics::ToleranceConfig;

pub use holder::{verify_flux_holder, HolderReport, HolderRow};
use integral::CapacityIntegral;

/// Admissible exponents for `p > 1` are `[P_MIN, P_MAX]`.
pub const P_MIN: f64 = 1.0 + 1e-3;
pub const P_MAX: f64 = 3.0 - 1e-3;

/// Geometric sample density of potential curves, per decade of radius.
const POTENTIAL_SAMPLES_PER_DECADE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityResult {
    pub p: f64,
    pub rho0: f64,
    pub ncap: f64,
    /// Minimized energy before normalization (`Φ`; for `p = 1` the least
    /// enclosing area).
    pub flux: f64,
    /// Absolute error estimate of `ncap`.
    pub err_estimate: f64,
    pub parabolic: bool,
    /// Radius of the outward-minimizing hull (`p = 1` only).
    pub hull_radius: Option<f64>,
}

pub fn check_exponent(p: f64) -> Result<()> {
    if (P_MIN..=P_MAX).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadExponent(p))
    }
}

/// `ncap` and `Φ` from the normalized integral `Ĩ = I_p·(4πA0²)^{1/(p−1)}`.
fn normalize(p: f64, a0: f64, reduced: f64) -> (f64, f64) {
    let scale = reduced.powf(-(p - 1.0));
    let flux = 4.0 * PI * a0 * a0 * scale;
    let ncap = a0 * a0 * ((p - 1.0) / (3.0 - p)).powf(p - 1.0) * scale;
    (ncap, flux)
}

/// Normalized p-capacity of the coordinate sphere at `rho0`, `1 < p < 3`.
pub fn p_capacity(metric: &RadialMetric, rho0: f64, p: f64, cfg: &ToleranceConfig) -> Result<CapacityResult> {
    check_exponent(p)?;
    let integral = CapacityIntegral::new(metric, rho0, p, cfg)?;
    if integral.parabolic() {
        return Ok(CapacityResult {
            p,
            rho0,
            ncap: 0.0,
            flux: 0.0,
            err_estimate: 0.0,
            parabolic: true,
            hull_radius: None,
        });
    }
    let (value, err) = integral.from(rho0)?;
    let (ncap, flux) = normalize(p, integral.a_ref(), value);
    Ok(CapacityResult {
        p,
        rho0,
        ncap,
        flux,
        err_estimate: ncap * (p - 1.0) * err / value,
        parabolic: false,
        hull_radius: None,
    })
}

/// Normalized 1-capacity: `(1/4π)·` least area of a coordinate sphere
/// enclosing the one at `rho0`, attained on its outward-minimizing hull.
pub fn one_capacity(metric: &RadialMetric, rho0: f64, cfg: &ToleranceConfig) -> Result<CapacityResult> {
    let hull = outward_hull(metric, rho0, cfg)?;
    Ok(CapacityResult {
        p: 1.0,
        rho0,
        ncap: hull.hull_area / (4.0 * PI),
        flux: hull.hull_area,
        err_estimate: 0.0,
        parabolic: false,
        hull_radius: Some(hull.rho_star),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub rho: f64,
    pub u: f64,
    /// `−(p−1)·ln u`.
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialCurve {
    pub p: f64,
    pub rho0: f64,
    pub samples: Vec<PotentialSample>,
}

fn sample(p: f64, rho: f64, u: f64) -> PotentialSample {
    PotentialSample { rho, u, w: -(p - 1.0) * u.ln() }
}

/// The radial p-capacitary potential of the sphere at `rho0`, sampled
/// geometrically from `rho0` to `cutoff_radius`.
pub fn capacitary_potential(metric: &RadialMetric, rho0: f64, p: f64, cfg: &ToleranceConfig) -> Result<PotentialCurve> {
    check_exponent(p)?;
    let integral = CapacityIntegral::new(metric, rho0, p, cfg)?;
    if integral.parabolic() {
        return Err(Error::ParabolicMetric(p));
    }
    if !(rho0 > 0.0 && cfg.cutoff_radius > rho0) {
        return Err(Error::Domain(format!("potential samples need 0 < rho0 < cutoff_radius, got {rho0}")));
    }
    let n = (POTENTIAL_SAMPLES_PER_DECADE * (cfg.cutoff_radius / rho0).log10()).ceil().max(1.0) as usize;
    let radii: Vec<f64> = (0..=n)
        .map(|k| if k == n { cfg.cutoff_radius } else { rho0 * (cfg.cutoff_radius / rho0).powf(k as f64 / n as f64) })
        .collect();
    let mut tails = vec![0.0; radii.len()];
    tails[n] = integral.from(radii[n])?.0;
    for k in (0..n).rev() {
        tails[k] = tails[k + 1] + integral.between(radii[k], radii[k + 1])?.0;
    }
    let samples = radii.iter().zip(&tails).map(|(&rho, &t)| sample(p, rho, t / tails[0])).collect();
    Ok(PotentialCurve { p, rho0, samples })
}

/// The radial p-capacitary potential of the sphere at `rho0`, evaluated at
/// a single radius `rho ≥ rho0`.
pub fn capacitary_potential_at(
    metric: &RadialMetric,
    rho0: f64,
    p: f64,
    rho: f64,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_exponent(p)?;
    if !(rho >= rho0) {
        return Err(Error::Domain(format!("potential evaluated at {rho}, inside the sphere at {rho0}")));
    }
    let integral = CapacityIntegral::new(metric, rho0, p, cfg)?;
    if integral.parabolic() {
        return Err(Error::ParabolicMetric(p));
    }
    Ok(integral.from(rho)?.0 / integral.from(rho0)?.0)
}

#[cfg(test)]
mod tests;
