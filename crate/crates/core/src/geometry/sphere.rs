use std::f64::consts::PI;

use serde::Serialize;

use super::{Gauge, RadialMetric};
use crate::error::{Error, Result};
use crate::numerics::ToleranceConfig;

/// Geometry of the centered coordinate sphere at one radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereData {
    pub rho: f64,
    pub area: f64,
    /// Volume enclosed between the domain start and the sphere.
    pub volume: f64,
    pub mean_curvature: f64,
    pub hawking_mass: f64,
    /// `∫H² dσ`.
    pub willmore: f64,
    /// Ambient scalar curvature at the sphere.
    pub scalar_curvature: f64,
}

pub fn sphere_data(metric: &RadialMetric, rho: f64, cfg: &ToleranceConfig) -> Result<SphereData> {
    let volume = metric.volume(rho, cfg)?;
    sphere_data_with_volume(metric, rho, volume)
}

/// Sphere quantities with a volume the caller has already accumulated.
pub(crate) fn sphere_data_with_volume(metric: &RadialMetric, rho: f64, volume: f64) -> Result<SphereData> {
    let local = metric.local(rho)?;
    let a = local.radius;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("the sphere at {rho} is degenerate (zero area)")));
    }
    let d2 = match metric.gauge() {
        Gauge::Geodesic => local.slope * local.slope,
        // f itself, so that areal-gauge identities hold to rounding.
        Gauge::Areal => metric.profile_at(rho)?.value.max(0.0),
    };
    Ok(SphereData {
        rho,
        area: 4.0 * PI * a * a,
        volume,
        mean_curvature: 2.0 * local.slope / a,
        hawking_mass: 0.5 * a * (1.0 - d2),
        willmore: 16.0 * PI * d2,
        scalar_curvature: local.scalar_curvature,
    })
}
