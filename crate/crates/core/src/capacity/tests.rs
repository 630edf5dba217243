use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::geometry::{BoundaryKind, Gauge};
use crate::profile::{parse, ParamSet};

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn geodesic(text: &str, start: f64) -> RadialMetric {
    RadialMetric::from_expr(Gauge::Geodesic, parse(text).unwrap(), ParamSet::new(), start, BoundaryKind::None, &cfg())
        .unwrap()
}

fn neck() -> RadialMetric {
    geodesic("r + 1.5*exp(-4*(r-3)^2)", 1.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let inner: f64 = (1..n).map(|k| f(lo + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(lo) + f(hi) + inner) * h / 3.0
}

/// Normalized capacity of the Schwarzschild sphere at `r0` by Simpson's rule
/// in `z`, where `sqrt(1 - 2m/r) = 1 - z^q` with `q = 2` for `α ≥ 2` and
/// `q = 1/(α-1)` below, which keeps the integrand smooth up to infinity for
/// the exponents used here.
fn schwarzschild_ncap_oracle(m: f64, r0: f64, p: f64) -> f64 {
    let alpha = 2.0 / (p - 1.0);
    let w0 = (1.0 - 2.0 * m / r0).sqrt();
    let integral = if alpha >= 2.0 {
        let z_max = (1.0 - w0).sqrt();
        simpson(|z| 2.0 * z.powf(2.0 * alpha - 3.0) * (2.0 - z * z).powf(alpha - 2.0), 0.0, z_max, 200_000)
    } else {
        let q = 1.0 / (alpha - 1.0);
        let z_max = (1.0 - w0).powf(alpha - 1.0);
        simpson(|z| q * (2.0 - z.powf(q)).powf(alpha - 2.0), 0.0, z_max, 200_000)
    };
    let reduced = (2.0 * m / r0).powf(-alpha) * 4.0 * m * integral;
    r0 * r0 * ((p - 1.0) / (3.0 - p)).powf(p - 1.0) * reduced.powf(-(p - 1.0))
}

#[test]
fn euclidean_spheres() {
    let flat = RadialMetric::flat();
    let c = p_capacity(&flat, 2.0, 1.5, &cfg()).unwrap();
    assert!(rel(c.ncap, 2f64.powf(1.5)) < 1e-8, "{}", c.ncap);
    assert!(!c.parabolic);
    for p in [1.2, 2.0, 2.8] {
        let c = p_capacity(&flat, 1.0, p, &cfg()).unwrap();
        assert!(rel(c.ncap, 1.0) < 1e-8, "p = {p}: {}", c.ncap);
        assert!(c.err_estimate < 1e-8);
    }
}

#[test]
fn schwarzschild_horizon_and_closed_form() {
    let s = RadialMetric::schwarzschild(1.0).unwrap();
    let c = p_capacity(&s, 2.0, 2.0, &cfg()).unwrap();
    assert!(rel(c.ncap, 1.0) < 1e-8, "{}", c.ncap);
    for r in [2.5f64, 4.0, 50.0, 1600.0] {
        let exact = 1.0 / (1.0 - (1.0 - 2.0 / r).sqrt());
        let c = p_capacity(&s, r, 2.0, &cfg()).unwrap();
        assert!(rel(c.ncap, exact) < 1e-9, "r = {r}: {} vs {exact}", c.ncap);
    }
}

#[test]
fn schwarzschild_matches_simpson_oracle() {
    let s = RadialMetric::schwarzschild(1.0).unwrap();
    for p in [1.1, 1.5, 1.8, 2.3, 2.7, 2.95] {
        for r0 in [2.0, 3.0, 40.0] {
            let c = p_capacity(&s, r0, p, &cfg()).unwrap();
            let oracle = schwarzschild_ncap_oracle(1.0, r0, p);
            assert!(rel(c.ncap, oracle) < 1e-9, "p = {p}, r0 = {r0}: {} vs {oracle}", c.ncap);
        }
    }
}

#[test]
fn one_capacity_of_spheres_and_necks() {
    let c = one_capacity(&RadialMetric::flat(), 3.0, &cfg()).unwrap();
    assert!(rel(c.ncap, 9.0) < 1e-12);
    assert_eq!(c.hull_radius, Some(3.0));
    let c = one_capacity(&RadialMetric::schwarzschild(1.0).unwrap(), 2.0, &cfg()).unwrap();
    assert!(rel(c.ncap, 4.0) < 1e-12);

    let n = 1_000_000;
    let a_min = (0..=n)
        .map(|k| 3.0 + 3.0 * k as f64 / n as f64)
        .map(|x| x + 1.5 * (-4.0 * (x - 3.0) * (x - 3.0)).exp())
        .fold(f64::INFINITY, f64::min);
    let c = one_capacity(&neck(), 3.0, &cfg()).unwrap();
    assert!(rel(c.ncap, a_min * a_min) < 1e-9, "{} vs {}", c.ncap, a_min * a_min);
    assert!(c.ncap < 4.5 * 4.5);
}

#[test]
fn one_capacity_bounded_by_area() {
    let m = neck();
    for rho0 in [1.5, 2.5, 3.0, 3.4, 4.0, 6.0] {
        let c = one_capacity(&m, rho0, &cfg()).unwrap();
        assert!(4.0 * PI * c.ncap <= m.area(rho0).unwrap() * (1.0 + 1e-12));
    }
}

#[test]
fn capacity_grows_with_the_sphere() {
    let s = RadialMetric::schwarzschild(1.0).unwrap();
    let m = neck();
    for p in [1.5, 2.0, 2.5] {
        for metric in [&s, &m] {
            let start = metric.domain_start().max(1.0);
            let caps: Vec<f64> =
                (0..12).map(|k| p_capacity(metric, start + 0.5 * k as f64, p, &cfg()).unwrap().ncap).collect();
            assert!(caps.windows(2).all(|w| w[1] >= w[0]), "p = {p}: {caps:?}");
        }
    }
}

#[test]
fn scaling_covariance() {
    let base = p_capacity(&neck(), 2.5, 1.7, &cfg()).unwrap().ncap;
    for lam in [0.5, 2.0] {
        let scaled = geodesic(&format!("{lam}*(r/{lam} + 1.5*exp(-4*(r/{lam}-3)^2))"), lam);
        let c = p_capacity(&scaled, 2.5 * lam, 1.7, &cfg()).unwrap();
        let expected = lam.powf(3.0 - 1.7) * base;
        assert!(rel(c.ncap, expected) < 1e-8, "λ = {lam}: {} vs {expected}", c.ncap);
    }
}

#[test]
fn approaches_one_capacity_as_p_decreases() {
    for (metric, rho0) in [(RadialMetric::flat(), 2.0), (RadialMetric::schwarzschild(1.0).unwrap(), 3.0)] {
        let one = one_capacity(&metric, rho0, &cfg()).unwrap().ncap;
        let gaps: Vec<f64> = [1.5, 1.25, 1.1, 1.05, 1.01]
            .iter()
            .map(|&p| (p_capacity(&metric, rho0, p, &cfg()).unwrap().ncap - one).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert!(gaps[4] < 0.1 * one);
    }
}

#[test]
fn exponent_range_is_enforced() {
    let flat = RadialMetric::flat();
    for p in [0.5, 1.0, 1.0005, 3.0, 4.0, f64::NAN] {
        assert!(matches!(p_capacity(&flat, 1.0, p, &cfg()), Err(Error::BadExponent(_))), "p = {p}");
    }
    assert!(p_capacity(&flat, 1.0, P_MIN, &cfg()).is_ok());
    assert!(p_capacity(&flat, 1.0, P_MAX, &cfg()).is_ok());
}

#[test]
fn parabolic_ends() {
    let c = p_capacity(&RadialMetric::cylinder(2.0).unwrap(), 1.0, 2.0, &cfg()).unwrap();
    assert!(c.parabolic);
    assert_eq!(c.ncap, 0.0);
    assert!(matches!(
        capacitary_potential(&RadialMetric::cylinder(2.0).unwrap(), 1.0, 2.0, &cfg()),
        Err(Error::ParabolicMetric(_))
    ));

    // A ~ sqrt(s): the energy integrand decays like s^{-1/(p-1)}.
    let paraboloid = geodesic("sqrt(1 + r)", 0.0);
    assert!(!p_capacity(&paraboloid, 1.0, 1.5, &cfg()).unwrap().parabolic);
    assert!(p_capacity(&paraboloid, 1.0, 2.5, &cfg()).unwrap().parabolic);
}

#[test]
fn euclidean_potentials() {
    let flat = RadialMetric::flat();
    let curve = capacitary_potential(&flat, 1.0, 2.0, &cfg()).unwrap();
    assert!(curve.samples.len() > 100);
    for s in &curve.samples {
        assert!(rel(s.u, 1.0 / s.rho) < 1e-9, "{s:?}");
        assert!((s.w + s.u.ln()).abs() < 1e-12);
    }
    let curve = capacitary_potential(&flat, 1.0, 1.5, &cfg()).unwrap();
    for s in curve.samples.iter().filter(|s| s.rho < 1e4) {
        assert!(rel(s.u, s.rho.powi(-3)) < 1e-9, "{s:?}");
    }
}

#[test]
fn schwarzschild_potential_decays() {
    let s = RadialMetric::schwarzschild(1.0).unwrap();
    let curve = capacitary_potential(&s, 2.0, 2.0, &cfg()).unwrap();
    assert_eq!(curve.samples[0].u, 1.0);
    assert!(curve.samples.windows(2).all(|w| w[1].u < w[0].u));
    let u = capacitary_potential_at(&s, 2.0, 2.0, 1e6, &cfg()).unwrap();
    assert!(u < 1e-5);
    assert!(rel(u, 1.0 - (1.0 - 2e-6f64).sqrt()) < 1e-8);
    for sample in &curve.samples {
        let direct = capacitary_potential_at(&s, 2.0, 2.0, sample.rho, &cfg()).unwrap();
        assert!((sample.u - direct).abs() < 1e-9 * direct.max(1e-3), "{sample:?} vs {direct}");
    }
}

#[test]
fn potential_carries_constant_p_flux() {
    // Radial p-harmonic: A²|du/ds|^{p-1} is independent of the radius.
    let s = RadialMetric::schwarzschild(1.0).unwrap();
    for (p, rho0) in [(2.0, 2.0), (1.5, 2.5), (2.5, 2.0)] {
        let u = |x: f64| capacitary_potential_at(&s, rho0, p, x, &cfg()).unwrap();
        let flux = |r: f64| {
            let h = 1e-3 * r;
            // Fourth-order central difference.
            let du_dr = (8.0 * (u(r + h) - u(r - h)) - (u(r + 2.0 * h) - u(r - 2.0 * h))) / (12.0 * h);
            r * r * (du_dr * (1.0 - 2.0 / r).sqrt()).abs().powf(p - 1.0)
        };
        let reference = flux(3.0);
        for r in [4.0, 7.0, 15.0, 100.0] {
            let residual = (flux(r) - reference).abs() / reference;
            assert!(residual < 1e-6, "p = {p}, r = {r}: residual {residual:e}");
        }
    }
}

#[test]
fn holder_identity_on_radial_level_sets() {
    let r = verify_flux_holder(&RadialMetric::flat(), 1.0, 2.0, 50, &cfg()).unwrap();
    assert_eq!(r.rows.len(), 50);
    assert!(r.pass && r.max_rel_gap <= 1e-8, "{}", r.max_rel_gap);
    assert_eq!(r.rows[0].t, 1.0);
    assert!(r.rows.windows(2).all(|w| w[1].t < w[0].t));

    let s = RadialMetric::schwarzschild(1.0).unwrap();
    for p in [1.5, 2.0, 2.5] {
        for rho0 in [2.0, 3.0] {
            let r = verify_flux_holder(&s, rho0, p, 50, &cfg()).unwrap();
            assert!(r.pass && r.max_rel_gap <= 1e-8, "p = {p}, rho0 = {rho0}: {}", r.max_rel_gap);
        }
    }
    assert!(matches!(verify_flux_holder(&s, 2.0, 2.0, 1, &cfg()), Err(Error::InsufficientData { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euclidean_capacity_law(p in P_MIN..P_MAX, rho0 in 0.05f64..200.0) {
        let c = p_capacity(&RadialMetric::flat(), rho0, p, &cfg()).unwrap();
        prop_assert!(rel(c.ncap, rho0.powf(3.0 - p)) < 1e-8, "{} vs {}", c.ncap, rho0.powf(3.0 - p));
    }
}
