use serde::Serialize;

use super::{BoundaryKind, Gauge, RadialMetric, Table};
use crate::error::{Error, Result};
use crate::numerics::ToleranceConfig;

/// Smooth nondecreasing mass profile `μ(ρ) = μ∞·(1 + tanh((ρ − c)/w))/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassProfile {
    pub total: f64,
    pub center: f64,
    pub width: f64,
}

impl MassProfile {
    /// `(μ, μ′)` at `rho`.
    pub fn eval(&self, rho: f64) -> (f64, f64) {
        let t = ((rho - self.center) / self.width).tanh();
        (0.5 * self.total * (1.0 + t), 0.5 * self.total * (1.0 - t * t) / self.width)
    }
}

/// Geodesic-gauge metrics with nonnegative scalar curvature by construction.
///
/// The warping function solves `a′ = √(1 − 2μ(ρ)/a)` from `a(ρ_min) = a_min`.
/// Along such a solution the Hawking mass of every coordinate sphere is
/// `μ(ρ)` and the scalar curvature is `4μ′/(a²a′) ≥ 0`. Requiring
/// `a_min > 2μ∞` keeps `a′` bounded away from zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonnegativeCurvatureMetric {
    pub mass: MassProfile,
    pub rho_min: f64,
    pub a_min: f64,
}

const NODES_PER_DECADE: f64 = 200.0;
const RK_SUBSTEPS: usize = 4;

impl NonnegativeCurvatureMetric {
    pub fn new(mass: MassProfile, rho_min: f64, a_min: f64) -> Result<Self> {
        let ok = mass.total >= 0.0
            && mass.width > 0.0
            && [mass.total, mass.center, mass.width, rho_min, a_min].iter().all(|v| v.is_finite())
            && a_min > 2.0 * mass.total;
        if !ok {
            return Err(Error::InvalidMetric(format!(
                "generator needs μ∞ ≥ 0, w > 0 and a_min > 2μ∞ (got μ∞ = {}, w = {}, a_min = {a_min})",
                mass.total, mass.width
            )));
        }
        Ok(Self { mass, rho_min, a_min })
    }

    fn slope(&self, rho: f64, a: f64) -> f64 {
        (1.0 - 2.0 * self.mass.eval(rho).0 / a).max(0.0).sqrt()
    }

    fn curvature_of_slope(&self, rho: f64, a: f64) -> f64 {
        let (mu, dmu) = self.mass.eval(rho);
        let s = self.slope(rho, a);
        (mu * s / (a * a) - dmu / a) / s
    }

    /// Tabulates the solution up to `cutoff_radius` with classical RK4
    /// (uniform steps across the mass transition, geometric steps beyond).
    pub fn build(&self, cfg: &ToleranceConfig) -> Result<RadialMetric> {
        let MassProfile { center, width, .. } = self.mass;
        let h0 = width.min(1.0) / 20.0;
        let near_end = (center + 12.0 * width).max(self.rho_min + 1.0);
        let mut nodes = vec![self.rho_min];
        while *nodes.last().unwrap() < near_end {
            let next = nodes.last().unwrap() + h0;
            nodes.push(next);
        }
        let ratio = 10f64.powf(1.0 / NODES_PER_DECADE);
        while *nodes.last().unwrap() < cfg.cutoff_radius {
            let last = *nodes.last().unwrap();
            let next = (last + (last.abs().max(1.0)) * (ratio - 1.0)).min(cfg.cutoff_radius);
            nodes.push(next);
        }

        let mut values = Vec::with_capacity(nodes.len());
        let mut a = self.a_min;
        values.push(a);
        for w in nodes.windows(2) {
            let h = (w[1] - w[0]) / RK_SUBSTEPS as f64;
            let mut x = w[0];
            for _ in 0..RK_SUBSTEPS {
                let k1 = self.slope(x, a);
                let k2 = self.slope(x + 0.5 * h, a + 0.5 * h * k1);
                let k3 = self.slope(x + 0.5 * h, a + 0.5 * h * k2);
                let k4 = self.slope(x + h, a + h * k3);
                a += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                x += h;
            }
            values.push(a);
        }
        let d1 = nodes.iter().zip(&values).map(|(&x, &a)| self.slope(x, a)).collect();
        let d2 = nodes.iter().zip(&values).map(|(&x, &a)| self.curvature_of_slope(x, a)).collect();
        let table = Table::new(nodes, values, d1, d2)?;
        let label = format!(
            "generated:mu={},center={},width={},rho_min={},a_min={}",
            self.mass.total, center, width, self.rho_min, self.a_min
        );
        Ok(RadialMetric::from_table_unchecked(Gauge::Geodesic, table, BoundaryKind::None, label))
    }
}
