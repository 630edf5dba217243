use std::cell::RefCell;

use super::{find_root, integrate, minimize_bracketed, Quadrature, ToleranceConfig};
use crate::error::Result;

/// Adapts a fallible integrand to the plain `Fn(f64) -> f64` interface:
/// the first error is remembered, NaN is handed to the numerical routine,
/// and the remembered error takes precedence over whatever the routine
/// reports afterwards.
struct Capture<F> {
    f: F,
    first: RefCell<Option<crate::Error>>,
}

impl<F: Fn(f64) -> Result<f64>> Capture<F> {
    fn new(f: F) -> Self {
        Self { f, first: RefCell::new(None) }
    }

    fn call(&self, x: f64) -> f64 {
        match (self.f)(x) {
            Ok(v) => v,
            Err(e) => {
                self.first.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish<T>(self, out: Result<T>) -> Result<T> {
        match self.first.into_inner() {
            Some(e) => Err(e),
            None => out,
        }
    }
}

/// [`integrate`] for integrands that can fail.
pub fn try_integrate<F>(f: F, lo: f64, hi: f64, cfg: &ToleranceConfig) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    let cap = Capture::new(f);
    let out = integrate(|x| cap.call(x), lo, hi, cfg);
    cap.finish(out)
}

/// [`find_root`] for functions that can fail.
pub fn try_find_root<F>(f: F, lo: f64, hi: f64, cfg: &ToleranceConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let cap = Capture::new(f);
    let out = find_root(|x| cap.call(x), lo, hi, cfg);
    cap.finish(out)
}

/// [`minimize_bracketed`] for functions that can fail.
pub fn try_minimize<F>(f: F, lo: f64, hi: f64, cfg: &ToleranceConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let cap = Capture::new(f);
    let out = minimize_bracketed(|x| cap.call(x), lo, hi, cfg);
    cap.finish(out)
}
