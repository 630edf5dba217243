//! The Gauss hypergeometric function on the one-parameter line
//! `₂F₁(1/2, (3−p)/(p−1); 2/(p−1); x)`, `1 < p < 3`, `x ≤ 1`.
//!
//! Along this line `c − a − b = 1/2` and `c − b = 1`, which keeps every
//! transformation used below free of logarithmic cases.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::capacity::check_exponent;
use crate::error::{Error, Result};
use crate::numerics::{integrate, ToleranceConfig};

const MAX_TERMS: usize = 100_000;
/// Above this `b` the connection formula cancels badly near `x = 1/2`.
const CONNECTION_MAX_B: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct F21Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl F21Params {
    pub fn for_exponent(p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self { a: 0.5, b: (3.0 - p) / (p - 1.0), c: 2.0 / (p - 1.0) })
    }

    /// Coefficient of `xⁿ` in the power series.
    pub fn series_coefficient(&self, n: usize) -> f64 {
        (0..n).fold(1.0, |acc, k| {
            let k = k as f64;
            acc * (self.a + k) * (self.b + k) / ((self.c + k) * (k + 1.0))
        })
    }
}

/// `Σ (a)ₙ(b)ₙ/((c)ₙ n!) xⁿ` for `0 ≤ x < 1`, summed until the bound on the
/// remainder implied by the current term ratio drops below tolerance.
fn series(a: f64, b: f64, c: f64, x: f64, cfg: &ToleranceConfig) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        let ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        let tol = cfg.quad_abs_tol.min(cfg.quad_rel_tol * sum.abs());
        if ratio.abs() < 1.0 && term.abs() / (1.0 - ratio.abs()) < tol {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence(format!("hypergeometric series at x = {x} exhausted {MAX_TERMS} terms")))
}

/// Euler integral `b ∫₀¹ t^{b−1} (1−xt)^{−1/2} dt` with `t = 1 − s²`,
/// smooth up to `x = 1` when `b ≥ 1`.
fn euler_integral(b: f64, x: f64, cfg: &ToleranceConfig) -> Result<f64> {
    let q = integrate(|s| (1.0 - s * s).powf(b - 1.0) * s / (1.0 - x + x * s * s).sqrt(), 0.0, 1.0, cfg)?;
    Ok(2.0 * b * q.value)
}

/// `₂F₁(1/2, (3−p)/(p−1); 2/(p−1); x)` for `x ≤ 1`.
pub fn gauss_2f1(p: f64, x: f64, cfg: &ToleranceConfig) -> Result<f64> {
    let F21Params { a, b, c } = F21Params::for_exponent(p)?;
    if !(x <= 1.0) || x.is_infinite() {
        return Err(Error::Domain(format!("hypergeometric argument must be finite and at most 1, got {x}")));
    }
    if x < 0.0 {
        // Pfaff: (1−x)^{−a} F(a, c−b; c; x/(x−1)), and c − b = 1.
        let z = x / (x - 1.0);
        return Ok((1.0 - x).powf(-a) * series(a, 1.0, c, z, cfg)?);
    }
    if x <= 0.5 {
        return series(a, b, c, x, cfg);
    }
    if b > CONNECTION_MAX_B {
        return euler_integral(b, x, cfg);
    }
    // Connection to 1 − x. With a = 1/2: F(a, b; a; y) = (1−y)^{−b}, and the
    // second coefficient Γ(c)Γ(a+b−c)/(Γ(a)Γ(b)) reduces to −2b.
    let y = 1.0 - x;
    let first = (0.5 * std::f64::consts::PI.ln() + ln_gamma(c) - ln_gamma(c - 0.5)).exp() * x.powf(-b);
    let second = if y == 0.0 { 0.0 } else { 2.0 * b * y.sqrt() * series(c - a, c - b, 1.5, y, cfg)? };
    Ok(first - second)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionRow {
    pub x: f64,
    pub value: f64,
    /// `|₂F₁ − (1 + (3−p)x/4)| / x²`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    pub p: f64,
    pub rows: Vec<ExpansionRow>,
    /// Largest ratio over the grid.
    pub bound: f64,
}

/// Measures the remainder of the first-order expansion
/// `₂F₁ = 1 + (3−p)x/4 + O(x²)` on a grid in `[−0.1, 0.1] \ {0}`.
pub fn expansion_check(p: f64, x_grid: &[f64], cfg: &ToleranceConfig) -> Result<ExpansionReport> {
    check_exponent(p)?;
    let mut rows = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        if !(x.abs() <= 0.1 && x != 0.0) {
            return Err(Error::Domain(format!("expansion grid points must lie in [-0.1, 0.1] without 0, got {x}")));
        }
        let value = gauss_2f1(p, x, cfg)?;
        let ratio = (value - (1.0 + 0.25 * (3.0 - p) * x)).abs() / (x * x);
        rows.push(ExpansionRow { x, value, ratio });
    }
    let bound = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(ExpansionReport { p, rows, bound })
}
