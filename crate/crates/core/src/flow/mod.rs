//! Weak inverse mean curvature flow of centered spheres.
//!
//! In rotational symmetry the weak flow is explicit: after replacing the
//! initial sphere by its outward-minimizing hull, the sphere at time `t` is
//! the outermost coordinate sphere of area `hull_area·eᵗ`. Radii are solved
//! directly for every sample time; whenever the area profile folds back,
//! the flow jumps across the fold between two spheres of equal area.

mod diagnostics;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{probe_grid_from, sphere_data_with_volume, Gauge, RadialMetric, SphereData};
use crate::numerics::{try_find_root, try_minimize, ToleranceConfig};

pub use diagnostics::{geroch_check, willmore_limit, GerochReport, WillmoreLimit};

/// Relative slack below which two areas count as equal when comparing
/// minima and detecting folds.
const AREA_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hull {
    pub rho_star: f64,
    pub hull_area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowEvent {
    /// The initial sphere is replaced by its outward-minimizing hull at t = 0.
    HullReplacement { rho_before: f64, rho_after: f64, area_before: f64, area_after: f64 },
    /// ρ(t) is the outermost radius with area `hull_area·eᵗ` on `[t_start, t_end]`.
    SmoothSegment { t_start: f64, t_end: f64, rho_start: f64, rho_end: f64 },
    /// The flow crosses a fold of the area profile between equal-area spheres.
    Jump { t: f64, rho_before: f64, rho_after: f64, hawking_before: f64, hawking_after: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    pub sphere: SphereData,
    /// A jump happened in the interval ending at this sample.
    pub jump: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowTrack {
    pub rho0: f64,
    pub initial_area: f64,
    pub rho_star: f64,
    pub hull_area: f64,
    pub events: Vec<FlowEvent>,
    pub samples: Vec<FlowSample>,
}

/// The area profile tabulated on the probe grid from `x0`, with its suffix
/// minima (the outward-minimizing envelope).
struct Envelope {
    grid: Vec<f64>,
    radius: Vec<f64>,
    suffix_min: Vec<f64>,
}

impl Envelope {
    fn new(metric: &RadialMetric, x0: f64, cfg: &ToleranceConfig) -> Result<Self> {
        let grid = probe_grid_from(x0, cfg)?;
        let radius = grid.iter().map(|&x| metric.areal_radius(x)).collect::<Result<Vec<_>>>()?;
        let mut suffix_min = radius.clone();
        for j in (0..suffix_min.len() - 1).rev() {
            suffix_min[j] = suffix_min[j].min(suffix_min[j + 1]);
        }
        Ok(Self { grid, radius, suffix_min })
    }

    /// Outermost `x` with `A(x) = target`, assuming `target ≥ A(grid[0])`.
    fn outermost(&self, metric: &RadialMetric, target: f64, cfg: &ToleranceConfig) -> Result<f64> {
        let j = self.suffix_min.partition_point(|&m| m <= target);
        if j == 0 {
            return Err(Error::Domain(format!("areal radius {target} lies below the envelope")));
        }
        let lo = self.grid[j - 1];
        let hi = if j < self.grid.len() {
            self.grid[j]
        } else {
            let mut hi = 2.0 * lo.max(1.0);
            while metric.areal_radius(hi)? <= target {
                hi *= 2.0;
                if !hi.is_finite() {
                    return Err(Error::NotAsymptoticallyLarge(format!("areal radius never exceeds {target}")));
                }
            }
            hi
        };
        try_find_root(|x| Ok(metric.areal_radius(x)? - target), lo, hi, cfg)
    }
}

/// Refines the grid minimum at index `i` of the areal radius.
fn refine_min(metric: &RadialMetric, env: &Envelope, i: usize, cfg: &ToleranceConfig) -> Result<(f64, f64)> {
    let lo = env.grid[i.saturating_sub(1)];
    let hi = env.grid[(i + 1).min(env.grid.len() - 1)];
    let slope = |x: f64| -> Result<f64> {
        Ok(match metric.gauge() {
            Gauge::Geodesic => metric.profile_at(x)?.d1,
            Gauge::Areal => 1.0,
        })
    };
    // A sign change of dA/dx pins the minimum far more sharply than comparing areas.
    let x = if slope(lo)? < 0.0 && slope(hi)? > 0.0 {
        try_find_root(slope, lo, hi, cfg)?
    } else {
        try_minimize(|x| metric.areal_radius(x), lo, hi, cfg)?
    };
    let a = metric.areal_radius(x)?;
    Ok(if a < env.radius[i] * (1.0 - AREA_TIE) { (x, a) } else { (env.grid[i], env.radius[i]) })
}

/// The outermost sphere of least area among those enclosing the sphere at
/// `rho0`.
pub fn outward_hull(metric: &RadialMetric, rho0: f64, cfg: &ToleranceConfig) -> Result<Hull> {
    metric.check_largeness(cfg)?;
    let env = Envelope::new(metric, rho0, cfg)?;
    let global = env.suffix_min[0];
    let mut best: Option<(f64, f64)> = None;
    for i in 0..env.grid.len() {
        let a = env.radius[i];
        let is_local_min = (i == 0 || a <= env.radius[i - 1]) && (i + 1 == env.grid.len() || a <= env.radius[i + 1]);
        if !is_local_min || a > global * (1.0 + 1e-6) {
            continue;
        }
        let mut cand = refine_min(metric, &env, i, cfg)?;
        // On a plateau of exactly minimal area, move to its outer edge.
        let n = env.grid.len();
        let level = cand.1;
        let on_plateau = env.radius[i] <= level
            && ((i > 0 && env.radius[i - 1] <= level) || (i + 1 < n && env.radius[i + 1] <= level));
        if on_plateau && i + 1 < n && env.radius[i + 1] > level {
            let (mut lo, mut hi) = (env.grid[i], env.grid[i + 1]);
            while hi - lo > cfg.root_tol * hi.abs().max(1.0) {
                let mid = 0.5 * (lo + hi);
                if metric.areal_radius(mid)? <= level {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cand.0 = cand.0.max(lo);
        }
        best = match best {
            Some(b) if b.1 < cand.1 * (1.0 - AREA_TIE) => Some(b),
            _ => Some(cand),
        };
    }
    let (rho_star, a) = best.ok_or_else(|| Error::Domain("no minimum of the area profile found".into()))?;
    Ok(Hull { rho_star, hull_area: 4.0 * PI * a * a })
}

/// Weak inverse mean curvature flow from the sphere at `rho0`, sampled at
/// `n_samples` uniformly spaced times in `[0, t_max]`.
pub fn weak_imcf(
    metric: &RadialMetric,
    rho0: f64,
    t_max: f64,
    n_samples: usize,
    cfg: &ToleranceConfig,
) -> Result<FlowTrack> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Domain(format!("t_max must be positive, got {t_max}")));
    }
    if n_samples < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n_samples });
    }
    let hull = outward_hull(metric, rho0, cfg)?;
    let a_star = metric.areal_radius(hull.rho_star)?;
    let env = Envelope::new(metric, hull.rho_star, cfg)?;

    let mut events = Vec::new();
    let initial_area = metric.area(rho0)?;
    if hull.rho_star > rho0 {
        events.push(FlowEvent::HullReplacement {
            rho_before: rho0,
            rho_after: hull.rho_star,
            area_before: initial_area,
            area_after: hull.hull_area,
        });
    }

    let jumps = find_jumps(metric, &env, a_star, cfg)?;
    let mut t_prev = 0.0;
    let mut rho_prev = hull.rho_star;
    for jump in jumps.iter().filter(|j| j.t <= t_max) {
        events.push(FlowEvent::SmoothSegment {
            t_start: t_prev,
            t_end: jump.t,
            rho_start: rho_prev,
            rho_end: jump.rho_before,
        });
        let hawking_before = sphere_data_with_volume(metric, jump.rho_before, f64::NAN)?.hawking_mass;
        let hawking_after = sphere_data_with_volume(metric, jump.rho_after, f64::NAN)?.hawking_mass;
        events.push(FlowEvent::Jump {
            t: jump.t,
            rho_before: jump.rho_before,
            rho_after: jump.rho_after,
            hawking_before,
            hawking_after,
        });
        t_prev = jump.t;
        rho_prev = jump.rho_after;
    }

    let mut samples: Vec<FlowSample> = Vec::with_capacity(n_samples);
    let mut volume = 0.0;
    let mut last_rho = metric.domain_start();
    for k in 0..n_samples {
        let t = t_max * k as f64 / (n_samples - 1) as f64;
        let rho = if k == 0 { hull.rho_star } else { env.outermost(metric, a_star * (0.5 * t).exp(), cfg)? };
        volume += metric.volume_between(last_rho, rho, cfg)?;
        last_rho = rho;
        let sphere = sphere_data_with_volume(metric, rho, volume)?;
        let jump = k > 0 && jumps.iter().any(|j| j.t > samples[k - 1].t && j.t <= t);
        samples.push(FlowSample { t, sphere, jump });
    }
    events.push(FlowEvent::SmoothSegment { t_start: t_prev, t_end: t_max, rho_start: rho_prev, rho_end: last_rho });

    Ok(FlowTrack { rho0, initial_area, rho_star: hull.rho_star, hull_area: hull.hull_area, events, samples })
}

struct Fold {
    t: f64,
    rho_before: f64,
    rho_after: f64,
}

/// Folds of the area profile beyond the hull: maximal runs of grid points
/// lying strictly above the envelope. Each is crossed from the inner sphere
/// whose area equals the local minimum closing the run.
fn find_jumps(metric: &RadialMetric, env: &Envelope, a_star: f64, cfg: &ToleranceConfig) -> Result<Vec<Fold>> {
    let n = env.grid.len();
    let above = |j: usize| env.radius[j] > env.suffix_min[j] * (1.0 + AREA_TIE);
    let mut folds = Vec::new();
    let mut j = 0;
    while j < n {
        if !above(j) {
            j += 1;
            continue;
        }
        let j0 = j;
        while j < n && above(j) {
            j += 1;
        }
        let close = j.min(n - 1);
        let (rho_after, a_after) = refine_min(metric, env, close, cfg)?;
        let mut i = j0;
        while i > 0 && env.radius[i - 1] > a_after {
            i -= 1;
        }
        if i == 0 {
            return Err(Error::Domain("fold of the area profile reaches the hull".into()));
        }
        let rho_before = try_find_root(|x| Ok(metric.areal_radius(x)? - a_after), env.grid[i - 1], env.grid[i], cfg)?;
        folds.push(Fold { t: 2.0 * (a_after / a_star).ln(), rho_before, rho_after });
    }
    Ok(folds)
}

impl FlowTrack {
    /// CSV with columns `t,rho,area,volume,H,m_H,willmore,R,jump_flag`;
    /// numbers carry 17 significant digits.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["t", "rho", "area", "volume", "H", "m_H", "willmore", "R", "jump_flag"]).map_err(io)?;
        for s in &self.samples {
            let d = &s.sphere;
            let mut row: Vec<String> =
                [s.t, d.rho, d.area, d.volume, d.mean_curvature, d.hawking_mass, d.willmore, d.scalar_curvature]
                    .iter()
                    .map(|v| format_full(*v))
                    .collect();
            row.push(if s.jump { "1" } else { "0" }.to_string());
            w.write_record(&row).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// 17 significant digits, which round-trips every finite double.
pub fn format_full(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}
