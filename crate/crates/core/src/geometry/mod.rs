//! Rotationally symmetric 3-metrics and the geometry of their centered
//! spheres.
//!
//! A metric is given either in geodesic gauge, `dρ² + a(ρ)² g_S²`, or in
//! areal gauge, `f(r)⁻¹ dr² + r² g_S²`. Both are handled through the same
//! three radial functions of the coordinate `x`: the areal radius `A`
//! (`a` or `r`), the arclength derivative `D = dA/ds` (`a′` or `√f`) and the
//! lapse `ds/dx` (`1` or `f^(-1/2)`).

mod gauge;
mod generator;
mod hypotheses;
mod sphere;
mod table;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{try_integrate, ToleranceConfig};
use crate::profile::{Evaluation, ParamSet, ProfileExpr};

pub use gauge::to_geodesic;
pub use generator::{MassProfile, NonnegativeCurvatureMetric};
pub use hypotheses::{check_hypotheses, find_minimal_spheres, CurvatureViolation, HypothesisReport};
pub(crate) use sphere::sphere_data_with_volume;
pub use sphere::{sphere_data, SphereData};
pub use table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gauge {
    Geodesic,
    Areal,
}

impl std::str::FromStr for Gauge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "geodesic" => Ok(Gauge::Geodesic),
            "areal" => Ok(Gauge::Areal),
            other => Err(Error::Config(format!("unknown gauge `{other}` (expected geodesic or areal)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    None,
    Minimal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Expr { expr: ProfileExpr, params: ParamSet, bound: ProfileExpr },
    Table(Table),
}

impl Profile {
    fn eval(&self, x: f64) -> Result<Evaluation> {
        match self {
            Profile::Expr { bound, .. } => bound.eval_d2(x, &ParamSet::new()),
            Profile::Table(table) => table.eval(x),
        }
    }
}

/// Radial quantities at one coordinate value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Local {
    /// Areal radius `A`: the sphere has area `4πA²`.
    pub radius: f64,
    /// Derivative of `A` with respect to arclength.
    pub slope: f64,
    /// Arclength per unit coordinate; infinite on an areal-gauge horizon.
    pub lapse: f64,
    /// Ambient scalar curvature; NaN where `A = 0`.
    pub scalar_curvature: f64,
    /// The profile passed through a min/max tie here.
    pub non_smooth: bool,
}

/// A rotationally symmetric Riemannian 3-metric on `[domain_start, ∞) × S²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMetric {
    gauge: Gauge,
    profile: Profile,
    domain_start: f64,
    boundary: BoundaryKind,
    label: String,
}

const NEGATIVE_F_SLACK: f64 = 1e-14;
const THROAT_SERIES_RANGE: f64 = 1e-5;

impl RadialMetric {
    fn builtin(
        gauge: Gauge,
        text: &str,
        params: ParamSet,
        domain_start: f64,
        boundary: BoundaryKind,
        label: String,
    ) -> Self {
        let expr = ProfileExpr::parse(text).expect("built-in profile parses");
        let bound = expr.bind(&params).expect("built-in profile parameters are bound");
        Self { gauge, profile: Profile::Expr { expr, params, bound }, domain_start, boundary, label }
    }

    /// Euclidean space, `a(ρ) = ρ` on `[0, ∞)`.
    pub fn flat() -> Self {
        Self::builtin(Gauge::Geodesic, "r", ParamSet::new(), 0.0, BoundaryKind::None, "flat".into())
    }

    /// The exterior of the Schwarzschild horizon, `f(r) = 1 − 2m/r` on `[2m, ∞)`.
    pub fn schwarzschild(m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidMetric(format!("schwarzschild mass must be positive, got {m}")));
        }
        let params = ParamSet::new().with("m", m)?;
        Ok(Self::builtin(
            Gauge::Areal,
            "1 - 2*m/r",
            params,
            2.0 * m,
            BoundaryKind::Minimal,
            format!("schwarzschild:m={m}"),
        ))
    }

    /// The round cylinder `dρ² + a² g_S²` of constant radius `a`.
    pub fn cylinder(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidMetric(format!("cylinder radius must be positive, got {a}")));
        }
        let params = ParamSet::new().with("a", a)?;
        Ok(Self::builtin(Gauge::Geodesic, "a", params, 0.0, BoundaryKind::Minimal, format!("cylinder:a={a}")))
    }

    /// A metric from a profile expression, validated on the probe grid.
    pub fn from_expr(
        gauge: Gauge,
        expr: ProfileExpr,
        params: ParamSet,
        domain_start: f64,
        boundary: BoundaryKind,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let bound = expr.bind(&params)?;
        let label = format!("expr:{}:{}", gauge_name(gauge), expr);
        let metric = Self { gauge, profile: Profile::Expr { expr, params, bound }, domain_start, boundary, label };
        metric.validate(cfg)?;
        Ok(metric)
    }

    /// A metric from a tabulated profile starting at the table's first node.
    pub fn from_table(gauge: Gauge, table: Table, boundary: BoundaryKind, cfg: &ToleranceConfig) -> Result<Self> {
        let metric = Self::from_table_unchecked(gauge, table, boundary, format!("table:{}", gauge_name(gauge)));
        metric.validate(cfg)?;
        Ok(metric)
    }

    pub(crate) fn from_table_unchecked(gauge: Gauge, table: Table, boundary: BoundaryKind, label: String) -> Self {
        Self { gauge, domain_start: table.start(), profile: Profile::Table(table), boundary, label }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn gauge(&self) -> Gauge {
        self.gauge
    }

    pub fn domain_start(&self) -> f64 {
        self.domain_start
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// The raw profile (`a` or `f`) and its derivatives at `x`.
    pub fn profile_at(&self, x: f64) -> Result<Evaluation> {
        if !(x >= self.domain_start) {
            return Err(Error::Domain(format!("radius {x} lies below the domain start {}", self.domain_start)));
        }
        let e = self.profile.eval(x)?;
        if !(e.value.is_finite() && e.d1.is_finite() && e.d2.is_finite()) {
            return Err(Error::Eval(format!("profile is not finite at {x}")));
        }
        Ok(e)
    }

    pub fn local(&self, x: f64) -> Result<Local> {
        let e = self.profile_at(x)?;
        Ok(match self.gauge {
            Gauge::Geodesic => {
                let a = e.value;
                if a < 0.0 {
                    return Err(Error::Domain(format!("warping function is negative at {x}")));
                }
                let r = if a > 0.0 { 2.0 / (a * a) * (1.0 - e.d1 * e.d1 - 2.0 * a * e.d2) } else { f64::NAN };
                Local { radius: a, slope: e.d1, lapse: 1.0, scalar_curvature: r, non_smooth: e.non_smooth }
            }
            Gauge::Areal => {
                let f = clamp_areal(e.value, x)?;
                let r = if x > 0.0 { 2.0 / (x * x) * (1.0 - f - x * e.d1) } else { f64::NAN };
                let d = f.sqrt();
                Local { radius: x, slope: d, lapse: 1.0 / d, scalar_curvature: r, non_smooth: e.non_smooth }
            }
        })
    }

    /// Areal radius `A(x)`.
    pub fn areal_radius(&self, x: f64) -> Result<f64> {
        match self.gauge {
            Gauge::Geodesic => Ok(self.profile_at(x)?.value),
            Gauge::Areal => {
                self.profile_at(x)?;
                Ok(x)
            }
        }
    }

    pub fn area(&self, x: f64) -> Result<f64> {
        let a = self.areal_radius(x)?;
        Ok(4.0 * PI * a * a)
    }

    /// Volume enclosed between the coordinate spheres `x0 ≤ x1`.
    pub fn volume_between(&self, x0: f64, x1: f64, cfg: &ToleranceConfig) -> Result<f64> {
        if !(x0 >= self.domain_start) || !(x1 >= x0) {
            return Err(Error::Domain(format!("invalid volume shell [{x0}, {x1}]")));
        }
        if x1 == x0 {
            return Ok(0.0);
        }
        match self.gauge {
            Gauge::Geodesic => {
                let q = try_integrate(
                    |s| {
                        let a = self.profile_at(s)?.value;
                        Ok(4.0 * PI * a * a)
                    },
                    x0,
                    x1,
                    cfg,
                )?;
                Ok(q.value)
            }
            Gauge::Areal => {
                // r = start + σ² removes the inverse square root singularity of a horizon.
                let s0 = self.domain_start;
                let q = try_integrate(
                    |sigma| {
                        let r = s0 + sigma * sigma;
                        Ok(4.0 * PI * r * r * 2.0 * self.sigma_lapse(sigma)?)
                    },
                    (x0 - s0).sqrt(),
                    (x1 - s0).sqrt(),
                    cfg,
                )?;
                Ok(q.value)
            }
        }
    }

    /// `σ·f(start + σ²)^(-1/2)`, finite up to and including a simple zero of `f`
    /// at the domain start.
    pub(crate) fn sigma_lapse(&self, sigma: f64) -> Result<f64> {
        let s0 = self.domain_start;
        let r = s0 + sigma * sigma;
        let e = self.profile_at(r)?;
        let s2 = sigma * sigma;
        let mut f = clamp_areal(e.value, r)?;
        if s2 <= THROAT_SERIES_RANGE * s0.abs().max(1.0) {
            // Next to a zero of f the direct value is dominated by cancellation;
            // expand about r instead: f(r) = f(s0) + σ²f′(r) − σ⁴f″(r)/2 + O(σ⁶).
            let f0 = self.profile_at(s0)?.value;
            if f0.abs() <= THROAT_SERIES_RANGE * e.d1.abs() {
                f = f0.max(0.0) + s2 * e.d1 - 0.5 * s2 * s2 * e.d2;
            }
        }
        if !(f > 0.0) {
            return Err(Error::NonIntegrableThroat(r));
        }
        Ok(sigma / f.sqrt())
    }

    pub fn volume(&self, x: f64, cfg: &ToleranceConfig) -> Result<f64> {
        self.volume_between(self.domain_start, x, cfg)
    }

    /// The probe grid starting at the domain start.
    pub fn probe_grid(&self, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
        probe_grid_from(self.domain_start, cfg)
    }

    /// Checks the pointwise metric invariants on the probe grid: positive
    /// warping (a regular center `a = 0` is allowed at the domain start) or
    /// nonnegative areal coefficient, an integrable horizon, and the
    /// minimal-boundary condition when one is declared.
    pub fn validate(&self, cfg: &ToleranceConfig) -> Result<()> {
        cfg.validate()?;
        if !self.domain_start.is_finite() {
            return Err(Error::InvalidMetric("domain start must be finite".into()));
        }
        if self.gauge == Gauge::Areal && !(self.domain_start >= 0.0) {
            return Err(Error::InvalidMetric(format!(
                "areal radius must be nonnegative, got domain start {}",
                self.domain_start
            )));
        }
        let start = self.profile_at(self.domain_start).map_err(|e| self.invalid_at(self.domain_start, e))?;
        match self.gauge {
            Gauge::Geodesic => {
                if start.value < 0.0 {
                    return Err(Error::InvalidMetric(format!(
                        "a({}) = {} is negative",
                        self.domain_start, start.value
                    )));
                }
                if self.boundary == BoundaryKind::Minimal && start.d1.abs() > cfg.root_tol {
                    return Err(Error::InvalidMetric(format!(
                        "declared minimal boundary but a′({}) = {}",
                        self.domain_start, start.d1
                    )));
                }
            }
            Gauge::Areal => {
                if self.boundary == BoundaryKind::Minimal && start.value.abs() > cfg.root_tol {
                    return Err(Error::InvalidMetric(format!(
                        "declared minimal boundary but f({}) = {}",
                        self.domain_start, start.value
                    )));
                }
                if start.value.abs() <= cfg.root_tol && !(start.d1 > 0.0) {
                    return Err(Error::NonIntegrableThroat(self.domain_start));
                }
            }
        }
        for &x in self.probe_grid(cfg)?.iter().skip(1) {
            let e = self.profile_at(x).map_err(|e| self.invalid_at(x, e))?;
            match self.gauge {
                Gauge::Geodesic if !(e.value > 0.0) => {
                    return Err(Error::InvalidMetric(format!("a({x}) = {} is not positive", e.value)));
                }
                Gauge::Areal if e.value < -NEGATIVE_F_SLACK => {
                    return Err(Error::InvalidMetric(format!("f({x}) = {} is negative", e.value)));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn invalid_at(&self, x: f64, e: Error) -> Error {
        Error::InvalidMetric(format!("profile cannot be evaluated at {x}: {e}"))
    }

    /// The area profile must grow without bound: it has to increase across
    /// the last decade of the probe grid and gain at least half its value
    /// there.
    pub fn check_largeness(&self, cfg: &ToleranceConfig) -> Result<()> {
        let hi = cfg.cutoff_radius;
        let lo = (hi / 10.0).max(self.domain_start);
        let grid: Vec<f64> = self.probe_grid(cfg)?.into_iter().filter(|&x| x >= lo).collect();
        let mut prev = f64::NEG_INFINITY;
        for &x in &grid {
            let a = self.areal_radius(x)?;
            if a < prev {
                return Err(Error::NotAsymptoticallyLarge(format!("areal radius decreases near {x}")));
            }
            prev = a;
        }
        let (a_lo, a_hi) = (self.areal_radius(lo)?, self.areal_radius(hi)?);
        if !(a_hi >= 1.5 * a_lo) {
            return Err(Error::NotAsymptoticallyLarge(format!(
                "areal radius only grows from {a_lo} to {a_hi} over [{lo}, {hi}]"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for RadialMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn gauge_name(g: Gauge) -> &'static str {
    match g {
        Gauge::Geodesic => "geodesic",
        Gauge::Areal => "areal",
    }
}

fn clamp_areal(f: f64, x: f64) -> Result<f64> {
    if f >= 0.0 {
        Ok(f)
    } else if f >= -NEGATIVE_F_SLACK {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("areal coefficient f({x}) = {f} is negative")))
    }
}

/// Geometric probe grid from `x0` to `cutoff_radius`: `x0` itself followed by
/// `x0 + d`, with offsets `d` log-spaced at `probe_per_decade` per decade from
/// `1e-3·max(1, |x0|)`, closed by the cutoff.
pub fn probe_grid_from(x0: f64, cfg: &ToleranceConfig) -> Result<Vec<f64>> {
    let d0 = 1e-3 * x0.abs().max(1.0);
    let span = cfg.cutoff_radius - x0;
    if !(span > d0) {
        return Err(Error::Config(format!(
            "cutoff_radius {} does not lie beyond the probe start {x0}",
            cfg.cutoff_radius
        )));
    }
    let decades = (span / d0).log10();
    let n = (decades * cfg.probe_per_decade as f64).ceil() as usize;
    let mut grid = Vec::with_capacity(n + 2);
    grid.push(x0);
    for k in 0..n {
        let x = x0 + d0 * 10f64.powf(k as f64 / cfg.probe_per_decade as f64);
        if x < cfg.cutoff_radius && x > grid[grid.len() - 1] {
            grid.push(x);
        }
    }
    grid.push(cfg.cutoff_radius);
    Ok(grid)
}
