//! Scalar curvature of warped-product metrics checked against a direct
//! finite-difference evaluation of the Levi-Civita connection in the
//! coordinates (x, θ, φ).

use isocap::geometry::{BoundaryKind, Gauge, RadialMetric};
use isocap::profile::{parse, ParamSet};
use isocap::ToleranceConfig;

type Mat = [[f64; 3]; 3];

fn inverse_diag(g: &Mat) -> Mat {
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        inv[i][i] = 1.0 / g[i][i];
    }
    inv
}

/// Scalar curvature of the metric `g(x, θ)` (diagonal, independent of φ) at
/// `(x, θ)`, from central differences of the components.
fn fd_scalar_curvature(g: &dyn Fn(f64, f64) -> Mat, x: f64, theta: f64) -> f64 {
    let h = 1e-4 * x.abs().max(1.0);
    let k = 1e-4;
    let steps = [h, k];
    let at = |dx: f64, dt: f64| g(x + dx, theta + dt);
    let shift = |m: usize, s: f64| if m == 0 { (s, 0.0) } else { (0.0, s) };

    let g0 = at(0.0, 0.0);
    let ginv = inverse_diag(&g0);
    // dg[m][i][j] = ∂_m g_ij, d2g[m][n][i][j] = ∂_m ∂_n g_ij; φ-derivatives vanish.
    let mut dg = [[[0.0; 3]; 3]; 3];
    let mut d2g = [[[[0.0; 3]; 3]; 3]; 3];
    for m in 0..2 {
        let (a, b) = shift(m, steps[m]);
        let (gp, gm) = (at(a, b), at(-a, -b));
        for i in 0..3 {
            for j in 0..3 {
                dg[m][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * steps[m]);
                d2g[m][m][i][j] = (gp[i][j] - 2.0 * g0[i][j] + gm[i][j]) / (steps[m] * steps[m]);
            }
        }
    }
    let (pp, pm, mp, mm) = (at(h, k), at(h, -k), at(-h, k), at(-h, -k));
    for i in 0..3 {
        for j in 0..3 {
            let v = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * h * k);
            d2g[0][1][i][j] = v;
            d2g[1][0][i][j] = v;
        }
    }

    // Γ^a_ij and ∂_m Γ^a_ij.
    let mut gamma = [[[0.0; 3]; 3]; 3];
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let l = a;
                let lower = 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                gamma[a][i][j] = ginv[a][l] * lower;
                for m in 0..3 {
                    let d_lower = 0.5 * (d2g[m][i][j][l] + d2g[m][j][i][l] - d2g[m][l][i][j]);
                    let d_inv = -ginv[a][a] * dg[m][a][a] * ginv[a][a];
                    dgamma[m][a][i][j] = d_inv * lower + ginv[a][l] * d_lower;
                }
            }
        }
    }

    let mut scalar = 0.0;
    for i in 0..3 {
        let j = i;
        let mut ric = 0.0;
        for a in 0..3 {
            ric += dgamma[a][a][i][j] - dgamma[j][a][i][a];
            for b in 0..3 {
                ric += gamma[a][a][b] * gamma[b][i][j] - gamma[a][j][b] * gamma[b][i][a];
            }
        }
        scalar += ginv[i][j] * ric;
    }
    scalar
}

fn metric(gauge: Gauge, text: &str, start: f64) -> RadialMetric {
    RadialMetric::from_expr(
        gauge,
        parse(text).unwrap(),
        ParamSet::new(),
        start,
        BoundaryKind::None,
        &ToleranceConfig::default(),
    )
    .unwrap()
}

fn check(m: &RadialMetric, xs: &[f64]) {
    let components = |x: f64, th: f64| -> Mat {
        let e = m.profile_at(x).unwrap();
        let s2 = th.sin().powi(2);
        match m.gauge() {
            Gauge::Geodesic => [[1.0, 0.0, 0.0], [0.0, e.value * e.value, 0.0], [0.0, 0.0, e.value * e.value * s2]],
            Gauge::Areal => [[1.0 / e.value, 0.0, 0.0], [0.0, x * x, 0.0], [0.0, 0.0, x * x * s2]],
        }
    };
    for &x in xs {
        let fd = fd_scalar_curvature(&components, x, 1.1);
        let local = m.local(x).unwrap();
        let scale = 1.0 / (local.radius * local.radius);
        assert!(
            (fd - local.scalar_curvature).abs() <= 1e-5 * scale.max(local.scalar_curvature.abs()),
            "{} at {x}: formula {} vs finite differences {fd}",
            m.label(),
            local.scalar_curvature
        );
    }
}

#[test]
fn geodesic_gauge_curvature() {
    check(&metric(Gauge::Geodesic, "r + 1.5*exp(-4*(r-3)^2)", 1.0), &[1.5, 2.8, 3.0, 3.3, 5.0]);
    check(&metric(Gauge::Geodesic, "r*(1 - 0.5*exp(-r^2))", 0.0), &[0.3, 0.9, 1.6, 3.0]);
    check(&metric(Gauge::Geodesic, "2 + sin(r)", 0.0), &[0.5, 2.0, 4.0]);
    check(&RadialMetric::cylinder(2.0).unwrap(), &[1.0, 5.0]);
}

#[test]
fn areal_gauge_curvature() {
    check(&RadialMetric::schwarzschild(1.0).unwrap(), &[2.5, 4.0, 10.0]);
    check(&metric(Gauge::Areal, "1 - 2/r + 0.5/r^2", 2.0), &[2.2, 3.0, 8.0]);
    check(&metric(Gauge::Areal, "1 + 0.2*tanh(r - 3)", 0.5), &[1.0, 3.0, 4.5]);
}
