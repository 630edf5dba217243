use std::f64::consts::PI;

use serde::Serialize;

use crate::capacity::p_capacity;
use crate::error::Result;
use crate::geometry::{sphere_data, RadialMetric};
use crate::numerics::ToleranceConfig;
use crate::specfun::gauss_2f1;

const BOUND_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityBoundReport {
    pub rho: f64,
    pub p: f64,
    /// Hypergeometric argument `1 − W/16π`.
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `(rhs − lhs)/rhs`.
    pub slack: f64,
    pub pass: bool,
}

/// Capacity bound by area and Willmore energy:
/// `ncap ≤ (|∂Ω|/4π)^{(3−p)/2} · ₂F₁(1/2, (3−p)/(p−1); 2/(p−1); 1 − W/16π)^{−(p−1)}`.
pub fn capacity_bound_check(
    metric: &RadialMetric,
    rho: f64,
    p: f64,
    cfg: &ToleranceConfig,
) -> Result<CapacityBoundReport> {
    let cap = p_capacity(metric, rho, p, cfg)?;
    let s = sphere_data(metric, rho, cfg)?;
    let x = 1.0 - s.willmore / (16.0 * PI);
    let rhs = (s.area / (4.0 * PI)).powf(0.5 * (3.0 - p)) * gauss_2f1(p, x, cfg)?.powf(-(p - 1.0));
    let lhs = cap.ncap;
    Ok(CapacityBoundReport { rho, p, x, lhs, rhs, slack: (rhs - lhs) / rhs, pass: lhs <= rhs * (1.0 + BOUND_SLACK) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsoperimetricRow {
    pub rho: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoperimetricReport {
    pub m_bound: f64,
    pub rows: Vec<IsoperimetricRow>,
    /// Smallest grid radius from which every check passes.
    pub threshold: Option<f64>,
}

/// `|Ω| ≤ |∂Ω|^{3/2}/(6√π) + (m/2)·|∂Ω|` on each sphere of `r_grid`.
pub fn asymptotic_isoperimetric_check(
    metric: &RadialMetric,
    m_bound: f64,
    r_grid: &[f64],
    cfg: &ToleranceConfig,
) -> Result<IsoperimetricReport> {
    let mut rows = Vec::with_capacity(r_grid.len());
    for &rho in r_grid {
        let s = sphere_data(metric, rho, cfg)?;
        let rhs = s.area.powf(1.5) / (6.0 * PI.sqrt()) + 0.5 * m_bound * s.area;
        rows.push(IsoperimetricRow { rho, lhs: s.volume, rhs, pass: s.volume <= rhs });
    }
    let passing_suffix = rows.iter().rev().take_while(|r| r.pass).count();
    let threshold = (passing_suffix > 0).then(|| rows[rows.len() - passing_suffix].rho);
    Ok(IsoperimetricReport { m_bound, rows, threshold })
}
