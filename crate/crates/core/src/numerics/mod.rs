//! Scalar numerics shared by the geometric modules: adaptive quadrature on
//! finite and semi-infinite ranges, bracketed root finding and limit
//! extrapolation of slowly converging sequences.
//!
//! Everything here is pure and deterministic.

mod extrapolate;
mod fallible;
mod quadrature;
mod roots;

pub use extrapolate::{extrapolate_limit, Extrapolation};
pub use fallible::{try_find_root, try_integrate, try_minimize};
pub use quadrature::{integrate, Quadrature};
pub use roots::{find_root, minimize_bracketed};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances and budgets used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub quad_rel_tol: f64,
    pub quad_abs_tol: f64,
    /// Root bracket width, relative to `max(1, |x|)`.
    pub root_tol: f64,
    /// Maximum bisection depth of the adaptive quadrature.
    pub max_subdivisions: usize,
    pub extrap_terms: usize,
    /// Outer end of probe grids used by scans and hypothesis checks.
    pub cutoff_radius: f64,
    /// Probe grid density (points per decade of radius).
    pub probe_per_decade: usize,
    /// Absolute tolerance (scaled by `max(1, |m|)`) a mass extrapolation
    /// error must meet for a CONVERGED verdict.
    pub report_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            quad_rel_tol: 1e-10,
            quad_abs_tol: 1e-12,
            root_tol: 1e-12,
            max_subdivisions: 60,
            extrap_terms: 6,
            cutoff_radius: 1e8,
            probe_per_decade: 2000,
            report_tol: 1e-3,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("quad_rel_tol", self.quad_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
            ("root_tol", self.root_tol),
            ("report_tol", self.report_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::Config(format!("{name} must be strictly positive, got {value}")));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be positive".into()));
        }
        if self.extrap_terms < 3 {
            return Err(Error::Config(format!("extrap_terms must be at least 3, got {}", self.extrap_terms)));
        }
        if !(self.cutoff_radius > 1.0 && self.cutoff_radius.is_finite()) {
            return Err(Error::Config(format!("cutoff_radius must exceed 1, got {}", self.cutoff_radius)));
        }
        if self.probe_per_decade < 10 {
            return Err(Error::Config("probe_per_decade must be at least 10".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        ToleranceConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let cfg = ToleranceConfig { extrap_terms: 2, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ToleranceConfig { cutoff_radius: 0.5, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ToleranceConfig { quad_rel_tol: 0.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
