use super::*;
use crate::geometry::{BoundaryKind, Gauge, MassProfile, NonnegativeCurvatureMetric};
use crate::profile::{parse, ParamSet};

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn geodesic(text: &str, start: f64) -> RadialMetric {
    RadialMetric::from_expr(Gauge::Geodesic, parse(text).unwrap(), ParamSet::new(), start, BoundaryKind::None, &cfg())
        .unwrap()
}

fn neck_scaled(lam: f64) -> RadialMetric {
    geodesic(&format!("{lam}*(r/{lam} + 1.5*exp(-4*(r/{lam}-3)^2))"), lam)
}

fn doubling_grid() -> Vec<f64> {
    (0..6).map(|k| 50.0 * 2f64.powi(k)).collect()
}

fn schwarzschild() -> RadialMetric {
    RadialMetric::schwarzschild(1.0).unwrap()
}

#[test]
fn euclidean_masses_vanish() {
    let flat = RadialMetric::flat();
    for p in [1.0, 1.25, 1.5, 2.0, 2.5, 2.9] {
        for rho in [1.0, 10.0, 100.0] {
            let m = quasilocal_mass(&flat, rho, p, &cfg()).unwrap();
            assert!(!m.divergent);
            assert!(m.value.abs() <= 1e-9, "p = {p}, rho = {rho}: {}", m.value);
        }
    }
    assert!(huisken_mass(&flat, 1.0, &cfg()).unwrap().abs() < 1e-14);
    let r = total_mass(&flat, 1.5, &doubling_grid(), &cfg()).unwrap();
    assert!(r.extrapolated.abs() <= 1e-6 && r.verdict == Verdict::Converged, "{r:?}");
}

#[test]
fn schwarzschild_quasilocal_values() {
    let s = schwarzschild();
    let m = quasilocal_mass(&s, 100.0, 2.0, &cfg()).unwrap().value;
    assert!(m > 0.9 && m < 1.1, "{m}");
    assert!((huisken_mass(&s, 100.0, &cfg()).unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn p_equal_one_is_huisken_on_own_hulls() {
    for (metric, rho) in
        [(RadialMetric::flat(), 3.0), (schwarzschild(), 2.0), (schwarzschild(), 7.0), (neck_scaled(1.0), 6.0)]
    {
        let q = quasilocal_mass(&metric, rho, 1.0, &cfg()).unwrap().value;
        let h = huisken_mass(&metric, rho, &cfg()).unwrap();
        assert!((q - h).abs() <= 1e-12 * h.abs().max(1.0), "{}: {q} vs {h}", metric.label());
    }
    // Inside the neck the hull is larger than the sphere, which raises m^(1).
    let neck = neck_scaled(1.0);
    for rho in [2.8, 3.0, 3.3] {
        let q = quasilocal_mass(&neck, rho, 1.0, &cfg()).unwrap().value;
        let h = huisken_mass(&neck, rho, &cfg()).unwrap();
        assert!(h <= q + 1e-9, "rho = {rho}: {h} vs {q}");
    }
}

#[test]
fn masses_scale_linearly() {
    let base = neck_scaled(1.0);
    for p in [1.0, 1.5, 2.5] {
        let m = quasilocal_mass(&base, 4.0, p, &cfg()).unwrap().value;
        for lam in [0.5, 2.0] {
            let scaled = quasilocal_mass(&neck_scaled(lam), 4.0 * lam, p, &cfg()).unwrap().value;
            assert!(
                (scaled - lam * m).abs() <= 1e-7 * (lam * m).abs().max(1e-3),
                "p = {p}, λ = {lam}: {scaled} vs {}",
                lam * m
            );
        }
    }
}

#[test]
fn schwarzschild_total_masses() {
    let s = schwarzschild();
    for p in [1.0, 1.5, 2.0, 2.5] {
        let r = total_mass(&s, p, &doubling_grid(), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Converged, "p = {p}: {r:?}");
        assert!((r.extrapolated - 1.0).abs() <= 1e-3, "p = {p}: {}", r.extrapolated);
        assert_eq!(r.radii.len(), r.quasilocal.len());
    }
    let h = total_huisken_mass(&s, &doubling_grid(), &cfg()).unwrap();
    assert!((h.extrapolated - 1.0).abs() <= 1e-3 && h.verdict == Verdict::Converged, "{h:?}");
}

#[test]
fn cylinder_masses_diverge() {
    let c = RadialMetric::cylinder(2.0).unwrap();
    let m = quasilocal_mass(&c, 10.0, 2.0, &cfg()).unwrap();
    assert!(m.divergent && m.value == DIVERGENT_MASS);
    assert!(quasilocal_mass(&c, 10.0, 1.0, &cfg()).unwrap().divergent);
    let r = total_mass(&c, 2.0, &doubling_grid(), &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Divergent);
    assert_eq!(r.extrapolated, DIVERGENT_MASS);
    assert!(r.extrapolated.is_finite());
    let h = total_huisken_mass(&c, &doubling_grid(), &cfg()).unwrap();
    assert_eq!(h.verdict, Verdict::Divergent);
}

#[test]
fn growing_sequences_are_divergent() {
    // A ~ ρ/2 gives a solid-angle deficit and masses growing linearly in ρ.
    let cone = geodesic("0.5*r", 0.0);
    let r = total_mass(&cone, 2.0, &doubling_grid(), &cfg()).unwrap();
    assert!(r.quasilocal.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(r.verdict, Verdict::Divergent);
}

#[test]
fn equivalence_on_model_metrics() {
    let grid = [1.0, 1.25, 1.5, 2.0, 2.5, 2.9];
    let v = equivalence_report(&schwarzschild(), &grid, &doubling_grid(), 5e-3, &cfg()).unwrap();
    assert!(v.pass, "gap {}", v.max_pairwise_gap);
    for m in v.masses.iter().chain(std::iter::once(&v.huisken)) {
        assert!((m.extrapolated - 1.0).abs() <= 5e-3, "{:?}: {}", m.p, m.extrapolated);
    }
    let v = equivalence_report(&RadialMetric::flat(), &grid, &doubling_grid(), 1e-6, &cfg()).unwrap();
    assert!(v.pass && v.masses.iter().all(|m| m.extrapolated.abs() <= 1e-6));

    let v = equivalence_report(&RadialMetric::cylinder(2.0).unwrap(), &[2.0], &doubling_grid(), 1e-2, &cfg()).unwrap();
    assert!(!v.pass && v.max_pairwise_gap == DIVERGENT_MASS);
}

#[test]
fn generated_metric_limits_and_hawking_bound() {
    let mu = 0.8;
    let g = NonnegativeCurvatureMetric::new(MassProfile { total: mu, center: 4.0, width: 1.0 }, 0.0, 2.5).unwrap();
    let metric = g.build(&cfg()).unwrap();
    let grid: Vec<f64> = (0..6).map(|k| 100.0 * 2f64.powi(k)).collect();
    let v = equivalence_report(&metric, &[1.0, 1.5, 2.0, 2.5], &grid, 1e-2, &cfg()).unwrap();
    assert!(v.pass, "gap {}", v.max_pairwise_gap);
    for m in &v.masses {
        assert!((m.extrapolated - mu).abs() <= 1e-2, "{:?}: {}", m.p, m.extrapolated);
    }
    let start_hawking = crate::geometry::sphere_data(&metric, 1.0, &cfg()).unwrap().hawking_mass;
    for m in &v.masses {
        assert!(m.extrapolated >= start_hawking - 1e-2);
    }
}

#[test]
fn capacity_bound_holds_with_equality_in_model_cases() {
    let s = schwarzschild();
    let b = capacity_bound_check(&s, 2.0, 2.0, &cfg()).unwrap();
    assert!((b.x - 1.0).abs() < 1e-12);
    assert!((b.lhs - 1.0).abs() < 1e-6 && (b.rhs - 1.0).abs() < 1e-6, "{b:?}");
    let b = capacity_bound_check(&RadialMetric::flat(), 1.0, 2.0, &cfg()).unwrap();
    assert!((b.lhs - 1.0).abs() < 1e-9 && (b.rhs - 1.0).abs() < 1e-9, "{b:?}");
    for rho in [3.0, 5.0, 10.0, 100.0] {
        for p in [1.5, 2.0, 2.5] {
            let b = capacity_bound_check(&s, rho, p, &cfg()).unwrap();
            assert!(b.pass, "{b:?}");
        }
    }
}

#[test]
fn capacity_bound_on_a_neck() {
    let neck = neck_scaled(1.0);
    for rho in [2.0, 3.0, 4.0, 8.0] {
        let b = capacity_bound_check(&neck, rho, 2.0, &cfg()).unwrap();
        assert!(b.lhs.is_finite() && b.rhs.is_finite());
    }
}

#[test]
fn asymptotic_isoperimetric_inequality() {
    let s = schwarzschild();
    let grid: Vec<f64> = (0..=20).map(|k| 10.0 * 200f64.powf(k as f64 / 20.0)).collect();
    let above = asymptotic_isoperimetric_check(&s, 1.1, &grid, &cfg()).unwrap();
    let threshold = above.threshold.expect("passes eventually");
    assert!(threshold < 2000.0);
    let below = asymptotic_isoperimetric_check(&s, 0.9, &grid, &cfg()).unwrap();
    assert!(below.rows.iter().filter(|r| r.rho >= 100.0).all(|r| !r.pass));
    let flat = asymptotic_isoperimetric_check(&RadialMetric::flat(), 0.1, &grid, &cfg()).unwrap();
    assert!(flat.rows.iter().all(|r| r.pass));
    assert_eq!(flat.threshold, Some(10.0));
}

#[test]
fn report_export() {
    let r = total_mass(&schwarzschild(), 2.0, &doubling_grid(), &cfg()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    for key in ["metric", "p", "radii", "quasilocal", "extrapolated", "err", "verdict"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["verdict"], "CONVERGED");
    assert_eq!(json["metric"], "schwarzschild:m=1");
    let csv = r.to_csv().unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "metric,p,radius,quasilocal,extrapolated,err,verdict");
    assert_eq!(lines.len(), 7);
    assert_eq!(csv, total_mass(&schwarzschild(), 2.0, &doubling_grid(), &cfg()).unwrap().to_csv().unwrap());
}

#[test]
fn argument_checks() {
    let flat = RadialMetric::flat();
    for p in [0.9, 1.0005, 3.0] {
        assert!(matches!(quasilocal_mass(&flat, 1.0, p, &cfg()), Err(Error::BadExponent(_))));
    }
    assert!(matches!(total_mass(&flat, 2.0, &[1.0, 2.0], &cfg()), Err(Error::InsufficientData { .. })));
    assert!(total_mass(&flat, 2.0, &[1.0, 2.0, 2.0, 3.0, 4.0, 5.0], &cfg()).is_err());
    let grid = default_radius_grid(&schwarzschild(), &cfg()).unwrap();
    assert_eq!(grid.len(), cfg().extrap_terms);
    assert!((grid[0] - 102.0).abs() < 1e-9 && (grid[1] - 202.0).abs() < 1e-9);
}
