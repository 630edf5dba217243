use super::{Gauge, RadialMetric, Table};
use crate::error::{Error, Result};
use crate::numerics::{try_integrate, ToleranceConfig};

/// Tabulation density of converted profiles, in nodes per decade of `r − r_min`.
const NODES_PER_DECADE: f64 = 200.0;

/// Rewrites an areal-gauge metric in geodesic gauge.
///
/// The arclength `ρ(r) = ∫ f^(-1/2) dr` is accumulated on a geometric grid
/// in `r − r_min` reaching `cutoff_radius`; at every node `a = r`,
/// `a′ = √f` and `a″ = f′/2` are exact, and the nodes are joined by quintic
/// Hermite pieces. A geodesic-gauge metric is returned unchanged.
pub fn to_geodesic(metric: &RadialMetric, cfg: &ToleranceConfig) -> Result<RadialMetric> {
    if metric.gauge() == Gauge::Geodesic {
        return Ok(metric.clone());
    }
    let s0 = metric.domain_start();
    let start = metric.profile_at(s0)?;
    if start.value.abs() <= cfg.root_tol && !(start.d1 > 0.0) {
        return Err(Error::NonIntegrableThroat(s0));
    }
    let delta = 1e-6 * s0.abs().max(1.0);
    if !(cfg.cutoff_radius > s0 + delta) {
        return Err(Error::Config(format!("cutoff_radius {} does not exceed the domain start", cfg.cutoff_radius)));
    }
    let mut radii = vec![s0];
    let steps = (NODES_PER_DECADE * ((cfg.cutoff_radius - s0) / delta).log10()).ceil() as usize;
    for k in 0..steps {
        let r = s0 + delta * 10f64.powf(k as f64 / NODES_PER_DECADE);
        if r < cfg.cutoff_radius {
            radii.push(r);
        }
    }
    radii.push(cfg.cutoff_radius);

    let mut rho = Vec::with_capacity(radii.len());
    let mut a1 = Vec::with_capacity(radii.len());
    let mut a2 = Vec::with_capacity(radii.len());
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for (i, &r) in radii.iter().enumerate() {
        if i > 0 {
            let seg = try_integrate(
                |sigma| Ok(2.0 * metric.sigma_lapse(sigma)?),
                (radii[i - 1] - s0).sqrt(),
                (r - s0).sqrt(),
                cfg,
            )
            .map_err(|e| match e {
                Error::NonConvergence(_) if i == 1 => Error::NonIntegrableThroat(s0),
                other => other,
            })?
            .value;
            // Neumaier summation keeps the running arclength accurate.
            let t = sum + seg;
            carry += if sum.abs() >= seg.abs() { (sum - t) + seg } else { (seg - t) + sum };
            sum = t;
        }
        rho.push(sum + carry);
        let e = metric.profile_at(r)?;
        a1.push(e.value.max(0.0).sqrt());
        a2.push(0.5 * e.d1);
    }
    let table = Table::new(rho, radii, a1, a2)?;
    let label = format!("geodesic({})", metric.label());
    Ok(RadialMetric::from_table_unchecked(Gauge::Geodesic, table, metric.boundary(), label))
}
