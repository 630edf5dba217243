use std::f64::consts::PI;

use serde::Serialize;

use isocap::capacity::{one_capacity, p_capacity, verify_flux_holder, CapacityResult};
use isocap::flow::{geroch_check, weak_imcf, willmore_limit, FlowEvent, FlowTrack};
use isocap::geometry::{check_hypotheses, sphere_data, RadialMetric};
use isocap::masses::{
    asymptotic_isoperimetric_check, capacity_bound_check, default_radius_grid, equivalence_report, total_huisken_mass,
    MassReport, Verdict, EXHAUSTION_NOTE,
};
use isocap::{Error, Result, ToleranceConfig};

use crate::config::Format;
use crate::render::{csv, human, json, key_values, machine, table};

/// Rendered output and whether every check it contains passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, pass: true }
    }
}

/// Innermost sphere of positive area: the domain start, or one unit
/// beyond it when the start is a regular center.
pub fn reference_radius(metric: &RadialMetric) -> Result<f64> {
    let start = metric.domain_start();
    Ok(if metric.areal_radius(start)? > 0.0 { start } else { start + 1.0 })
}

fn fields(format: Format, pairs: &[(&str, f64)], value: &impl Serialize) -> Result<String> {
    match format {
        Format::Human => Ok(key_values(&pairs.iter().map(|(k, v)| (*k, human(*v))).collect::<Vec<_>>())),
        Format::Csv => {
            let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
            csv(&header, &[pairs.iter().map(|(_, v)| machine(*v)).collect()])
        }
        Format::Json => json(value),
    }
}

pub fn sphere(metric: &RadialMetric, rho: f64, format: Format, cfg: &ToleranceConfig) -> Result<Outcome> {
    let s = sphere_data(metric, rho, cfg)?;
    let pairs = [
        ("rho", s.rho),
        ("area", s.area),
        ("volume", s.volume),
        ("H", s.mean_curvature),
        ("m_H", s.hawking_mass),
        ("willmore", s.willmore),
        ("R", s.scalar_curvature),
    ];
    fields(format, &pairs, &s).map(Outcome::ok)
}

pub fn capacity(metric: &RadialMetric, rho0: f64, p: f64, format: Format, cfg: &ToleranceConfig) -> Result<Outcome> {
    let c: CapacityResult = if p == 1.0 { one_capacity(metric, rho0, cfg)? } else { p_capacity(metric, rho0, p, cfg)? };
    if format == Format::Json {
        return json(&c).map(Outcome::ok);
    }
    let mut pairs = vec![("p", c.p), ("rho0", c.rho0), ("ncap", c.ncap), ("flux", c.flux), ("err", c.err_estimate)];
    pairs.push(("parabolic", if c.parabolic { 1.0 } else { 0.0 }));
    if let Some(r) = c.hull_radius {
        pairs.push(("hull_radius", r));
    }
    fields(format, &pairs, &c).map(Outcome::ok)
}

fn describe_event(e: &FlowEvent) -> String {
    match *e {
        FlowEvent::HullReplacement { rho_before, rho_after, area_before, area_after } => format!(
            "hull replacement: rho {} -> {}, area {} -> {}",
            human(rho_before),
            human(rho_after),
            human(area_before),
            human(area_after)
        ),
        FlowEvent::SmoothSegment { t_start, t_end, rho_start, rho_end } => format!(
            "smooth: t in [{}, {}], rho {} -> {}",
            human(t_start),
            human(t_end),
            human(rho_start),
            human(rho_end)
        ),
        FlowEvent::Jump { t, rho_before, rho_after, hawking_before, hawking_after } => format!(
            "jump at t = {}: rho {} -> {}, m_H {} -> {}",
            human(t),
            human(rho_before),
            human(rho_after),
            human(hawking_before),
            human(hawking_after)
        ),
    }
}

fn flow_text(track: &FlowTrack) -> String {
    let mut out = key_values(&[
        ("rho0", human(track.rho0)),
        ("hull radius", human(track.rho_star)),
        ("hull area", human(track.hull_area)),
    ]);
    out += "\n";
    for e in &track.events {
        out += &describe_event(e);
        out += "\n";
    }
    out += "\n";
    let rows: Vec<Vec<String>> = track
        .samples
        .iter()
        .map(|s| {
            vec![
                human(s.t),
                human(s.sphere.rho),
                human(s.sphere.area),
                human(s.sphere.hawking_mass),
                human(s.sphere.willmore),
                if s.jump { "jump".into() } else { String::new() },
            ]
        })
        .collect();
    out + &table(&["t", "rho", "area", "m_H", "willmore", ""], &rows)
}

pub fn flow(
    metric: &RadialMetric,
    rho0: f64,
    t_max: f64,
    samples: usize,
    format: Format,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let track = weak_imcf(metric, rho0, t_max, samples, cfg)?;
    let text = match format {
        Format::Human => flow_text(&track),
        Format::Csv => track.to_csv()?,
        Format::Json => json(&track)?,
    };
    Ok(Outcome::ok(text))
}

fn mass_label(r: &MassReport) -> String {
    r.p.map(human).unwrap_or_else(|| "huisken".into())
}

pub fn mass(
    metric: &RadialMetric,
    p_grid: &[f64],
    r_grid: &[f64],
    format: Format,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let v = equivalence_report(metric, p_grid, r_grid, f64::INFINITY, cfg)?;
    let reports: Vec<&MassReport> = v.masses.iter().chain(std::iter::once(&v.huisken)).collect();
    let text = match format {
        Format::Json => json(&reports)?,
        Format::Csv => {
            let mut out = String::new();
            for (i, r) in reports.iter().enumerate() {
                let body = r.to_csv()?;
                out += if i == 0 { &body } else { body.split_once('\n').map_or("", |(_, rest)| rest) };
            }
            out
        }
        Format::Human => {
            let mut header = vec!["p".to_string()];
            header.extend(r_grid.iter().map(|r| format!("r={}", human(*r))));
            header.extend(["limit", "err", "verdict"].map(String::from));
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    let mut row = vec![mass_label(r)];
                    row.extend(r.quasilocal.iter().map(|m| human(*m)));
                    row.extend([human(r.extrapolated), human(r.err), r.verdict.to_string()]);
                    row
                })
                .collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            format!("metric: {}\n\n{}\nnote: {EXHAUSTION_NOTE}\n", metric.label(), table(&header, &rows))
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
struct SuiteReport<'a> {
    suite: &'a str,
    metric: &'a str,
    pass: bool,
    checks: &'a [Check],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Equivalence,
    Geroch,
    #[value(alias = "bmx")]
    CapacityBound,
    Holder,
    Willmore,
    Isoperimetric,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Equivalence => "equivalence",
            Suite::Geroch => "geroch",
            Suite::CapacityBound => "capacity-bound",
            Suite::Holder => "holder",
            Suite::Willmore => "willmore",
            Suite::Isoperimetric => "isoperimetric",
        }
    }
}

/// Optional overrides for the verification suites.
#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub p_grid: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub rho_grid: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub m_bound: Option<f64>,
    pub rho0: Option<f64>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
}

fn equivalence_checks(
    metric: &RadialMetric,
    opts: &VerifyOptions,
    cfg: &ToleranceConfig,
) -> Result<(Vec<Check>, bool)> {
    let p_grid = opts.p_grid.clone().unwrap_or_else(|| vec![1.0, 1.25, 1.5, 2.0, 2.5, 2.9]);
    let r_grid = match &opts.r_grid {
        Some(g) => g.clone(),
        None => default_radius_grid(metric, cfg)?,
    };
    let tol = opts.tol.unwrap_or(5e-3);
    let v = equivalence_report(metric, &p_grid, &r_grid, tol, cfg)?;
    let mut checks: Vec<Check> = v
        .masses
        .iter()
        .chain(std::iter::once(&v.huisken))
        .map(|r| Check {
            name: format!("total mass, p = {}", mass_label(r)),
            value: r.extrapolated,
            target: r.err,
            detail: r.verdict.to_string(),
            pass: r.verdict == Verdict::Converged,
        })
        .collect();
    checks.push(Check {
        name: "max pairwise gap".into(),
        value: v.max_pairwise_gap,
        target: tol,
        detail: String::new(),
        pass: v.pass,
    });
    let pass = checks.iter().all(|c| c.pass);
    Ok((checks, pass))
}

fn verify_checks(
    metric: &RadialMetric,
    suite: Suite,
    opts: &VerifyOptions,
    cfg: &ToleranceConfig,
) -> Result<(Vec<Check>, bool)> {
    let x0 = reference_radius(metric)?;
    let rho0 = opts.rho0.unwrap_or(x0);
    let mut checks = Vec::new();
    match suite {
        Suite::Equivalence => return equivalence_checks(metric, opts, cfg),
        Suite::Geroch => {
            let track = weak_imcf(metric, rho0, opts.t_max.unwrap_or(10.0), opts.samples.unwrap_or(201), cfg)?;
            let g = geroch_check(&track);
            let jumps = track.events.iter().filter(|e| matches!(e, FlowEvent::Jump { .. })).count();
            checks.push(Check {
                name: "Hawking mass nondecreasing along the flow".into(),
                value: g.worst_drop,
                target: 1e-8,
                detail: format!("{} samples, {jumps} jumps", track.samples.len()),
                pass: g.monotone,
            });
        }
        Suite::CapacityBound => {
            let radii = opts.rho_grid.clone().unwrap_or_else(|| [0.0, 1.0, 3.0, 8.0, 98.0].map(|d| x0 + d).to_vec());
            let p_grid = opts.p_grid.clone().unwrap_or_else(|| vec![1.5, 2.0, 2.5]);
            for &rho in &radii {
                for &p in &p_grid {
                    let b = capacity_bound_check(metric, rho, p, cfg)?;
                    checks.push(Check {
                        name: format!("capacity bound, rho = {}, p = {}", human(rho), human(p)),
                        value: b.lhs,
                        target: b.rhs,
                        detail: format!("slack {}", human(b.slack)),
                        pass: b.pass,
                    });
                }
            }
        }
        Suite::Holder => {
            let p_grid = opts.p_grid.clone().unwrap_or_else(|| vec![1.5, 2.0, 2.5]);
            let radii = opts.rho_grid.clone().unwrap_or_else(|| vec![x0, x0 + 1.0]);
            for &p in &p_grid {
                for &rho in &radii {
                    let r = verify_flux_holder(metric, rho, p, opts.samples.unwrap_or(50), cfg)?;
                    checks.push(Check {
                        name: format!("flux identity, p = {}, rho0 = {}", human(p), human(rho)),
                        value: r.max_rel_gap,
                        target: 1e-8,
                        detail: format!("{} level sets", r.rows.len()),
                        pass: r.pass,
                    });
                }
            }
        }
        Suite::Willmore => {
            let track = weak_imcf(metric, rho0, opts.t_max.unwrap_or(20.0), opts.samples.unwrap_or(201), cfg)?;
            let w = willmore_limit(&track, 0.5, cfg)?;
            let target = 16.0 * PI;
            let tol = opts.tol.unwrap_or(1e-3);
            checks.push(Check {
                name: "limit of the Willmore energy".into(),
                value: w.limit_estimate,
                target,
                detail: format!("relative deviation {}", human(w.deviation / target)),
                pass: w.deviation.abs() <= tol * target,
            });
        }
        Suite::Isoperimetric => {
            let m_bound = match opts.m_bound {
                Some(m) => m,
                None => {
                    let grid = default_radius_grid(metric, cfg)?;
                    let m = total_huisken_mass(metric, &grid, cfg)?.extrapolated;
                    m + 0.1 * m.abs().max(1.0)
                }
            };
            let grid = opts
                .r_grid
                .clone()
                .unwrap_or_else(|| (0..=20).map(|k| x0 + 10.0 * 200f64.powf(k as f64 / 20.0)).collect());
            let r = asymptotic_isoperimetric_check(metric, m_bound, &grid, cfg)?;
            for row in &r.rows {
                checks.push(Check {
                    name: format!("volume bound, rho = {}", human(row.rho)),
                    value: row.lhs,
                    target: row.rhs,
                    detail: format!("m = {}", human(m_bound)),
                    pass: row.pass,
                });
            }
            checks.push(Check {
                name: "threshold radius".into(),
                value: r.threshold.unwrap_or(f64::NAN),
                target: m_bound,
                detail: "all larger grid radii pass".into(),
                pass: r.threshold.is_some(),
            });
            // Only the existence of a threshold counts; rows inside it are informative.
            return Ok((checks, r.threshold.is_some()));
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok((checks, pass))
}

pub fn verify(
    metric: &RadialMetric,
    suite: Suite,
    opts: &VerifyOptions,
    format: Format,
    cfg: &ToleranceConfig,
) -> Result<Outcome> {
    let (checks, pass) = verify_checks(metric, suite, opts, cfg)?;
    let text = match format {
        Format::Json => json(&SuiteReport { suite: suite.name(), metric: metric.label(), pass, checks: &checks })?,
        Format::Csv => csv(
            &["suite", "check", "value", "target", "detail", "status"],
            &checks
                .iter()
                .map(|c| {
                    vec![
                        suite.name().into(),
                        c.name.clone(),
                        machine(c.value),
                        machine(c.target),
                        c.detail.clone(),
                        status(c.pass).into(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Human => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| vec![c.name.clone(), human(c.value), human(c.target), c.detail.clone(), status(c.pass).into()])
                .collect();
            let note = if suite == Suite::Equivalence { format!("note: {EXHAUSTION_NOTE}\n") } else { String::new() };
            format!(
                "suite: {}\nmetric: {}\n\n{}\n{note}{}\n",
                suite.name(),
                metric.label(),
                table(&["check", "value", "target", "detail", "status"], &rows),
                status(pass)
            )
        }
    };
    Ok(Outcome { text, pass })
}

fn status(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn hypotheses(metric: &RadialMetric, format: Format, cfg: &ToleranceConfig) -> Result<Outcome> {
    let h = check_hypotheses(metric, cfg)?;
    let worst = h.worst_violation.map(|v| (v.rho, v.value));
    let pairs: Vec<(&str, String)> = vec![
        ("scalar curvature >= 0", status(h.scalar_curvature_nonneg).into()),
        ("negative points", h.negative_points.to_string()),
        (
            "worst violation",
            worst.map_or_else(|| "none".into(), |(r, v)| format!("R = {} at rho = {}", human(v), human(r))),
        ),
        ("non-smooth points", h.non_smooth_points.to_string()),
        ("no interior minimal spheres", status(h.no_interior_minimal).into()),
        ("interior minimal radii", h.interior_minimal_radii.iter().map(|r| human(*r)).collect::<Vec<_>>().join(" ")),
        ("minimal boundary", status(h.minimal_boundary).into()),
        ("radial isoperimetric constant", human(h.radial_isoperimetric_constant)),
        ("isoperimetric minimizer", human(h.isoperimetric_minimizer)),
        ("probe points", h.probe_grid.len().to_string()),
        ("note", h.isoperimetric_note.into()),
    ];
    let text = match format {
        Format::Human => format!("metric: {}\n\n{}", metric.label(), key_values(&pairs)),
        Format::Json => json(&h)?,
        Format::Csv => {
            csv(&["property", "value"], &pairs.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect::<Vec<_>>())?
        }
    };
    Ok(Outcome { text, pass: h.all_pass() })
}

/// Parses a comma-separated list of numbers.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|_| Error::Config(format!("`{s}` is not a number"))))
        .collect()
}
