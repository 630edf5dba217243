//! The normalized radial energy integral `Ĩ(x) = ∫_x^∞ (A/A0)^{-α} ds`,
//! `α = 2/(p−1)`, split into a finite part near the sphere, a power-law
//! substituted middle part and an analytically summed far tail.

use crate::error::{Error, Result};
use crate::geometry::{Gauge, RadialMetric};
use crate::numerics::{try_integrate, ToleranceConfig};

/// Beyond this multiple of the middle part's start the integrand is
/// replaced by its local power law.
const FAR_FACTORS: [f64; 3] = [1e32, 1e16, 1e8];
const MAX_SUBSTITUTION_POWER: f64 = 1e4;

pub(super) struct CapacityIntegral<'a> {
    metric: &'a RadialMetric,
    alpha: f64,
    a_ref: f64,
    decay: f64,
    cfg: &'a ToleranceConfig,
}

impl<'a> CapacityIntegral<'a> {
    pub(super) fn new(metric: &'a RadialMetric, rho0: f64, p: f64, cfg: &'a ToleranceConfig) -> Result<Self> {
        let a_ref = metric.areal_radius(rho0)?;
        if !(a_ref > 0.0) {
            return Err(Error::Domain(format!("the sphere at {rho0} has zero area")));
        }
        let mut integral = Self { metric, alpha: 2.0 / (p - 1.0), a_ref, decay: f64::NAN, cfg };
        integral.decay = integral.decay_exponent(cfg.cutoff_radius.max(rho0))?;
        Ok(integral)
    }

    pub(super) fn a_ref(&self) -> f64 {
        self.a_ref
    }

    /// The integrand decays no faster than `1/s` at the cutoff radius.
    pub(super) fn parabolic(&self) -> bool {
        !(self.decay > 1.0)
    }

    /// `ln` of the integrand per unit coordinate length.
    fn log_density(&self, s: f64) -> Result<f64> {
        let local = self.metric.local(s)?;
        if !(local.radius > 0.0) {
            return Err(Error::Domain(format!("areal radius vanishes at {s}")));
        }
        Ok(-self.alpha * (local.radius / self.a_ref).ln() + local.lapse.ln())
    }

    /// Power-law decay exponent of the integrand over the decade ending at `s`.
    fn decay_exponent(&self, s: f64) -> Result<f64> {
        Ok(-(self.log_density(10.0 * s)? - self.log_density(s)?) / std::f64::consts::LN_10)
    }

    /// `∫_{x0}^{x1}` of the integrand, with `(value, error)`.
    pub(super) fn between(&self, x0: f64, x1: f64) -> Result<(f64, f64)> {
        if x1 <= x0 {
            return Ok((0.0, 0.0));
        }
        let q = match self.metric.gauge() {
            Gauge::Geodesic => try_integrate(|s| Ok(self.log_density(s)?.exp()), x0, x1, self.cfg)?,
            Gauge::Areal => {
                let s0 = self.metric.domain_start();
                try_integrate(
                    |sigma| {
                        let r = s0 + sigma * sigma;
                        Ok((r / self.a_ref).powf(-self.alpha) * 2.0 * self.metric.sigma_lapse(sigma)?)
                    },
                    (x0 - s0).sqrt(),
                    (x1 - s0).sqrt(),
                    self.cfg,
                )?
            }
        };
        Ok((q.value, q.err_estimate))
    }

    /// `∫_{x}^{∞}` of the integrand, with `(value, error)`.
    pub(super) fn from(&self, x: f64) -> Result<(f64, f64)> {
        let split = x + (x - self.metric.domain_start()).max(1.0);
        let (near, near_err) = self.between(x, split)?;
        let (far, far_err) = self.tail(split)?;
        Ok((near + far, near_err + far_err))
    }

    fn tail(&self, x: f64) -> Result<(f64, f64)> {
        let mut last_err = None;
        for factor in FAR_FACTORS {
            match self.tail_to(x, x * factor) {
                Ok(v) => return Ok(v),
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.expect("at least one far cutoff is tried"))
    }

    /// Middle part on `[x, far]` via `s = x·v^{-β}`, which flattens a
    /// power-law integrand, plus the power-law remainder beyond `far`.
    fn tail_to(&self, x: f64, far: f64) -> Result<(f64, f64)> {
        let decay = self.decay_exponent(far / 10.0)?;
        if !(decay > 1.0) {
            return Err(Error::ParabolicMetric(2.0 / self.alpha + 1.0));
        }
        let beta = (1.0 / (decay - 1.0)).clamp(1.0, MAX_SUBSTITUTION_POWER);
        let v_min = (x / far).powf(1.0 / beta);
        let q = try_integrate(
            |v| {
                let s = x * v.powf(-beta);
                Ok((self.log_density(s)? + (beta * s / v).ln()).exp())
            },
            v_min,
            1.0,
            self.cfg,
        )?;
        let remainder = far * self.log_density(far)?.exp() / (decay - 1.0);
        Ok((q.value + remainder, q.err_estimate + 1e-6 * remainder))
    }
}
