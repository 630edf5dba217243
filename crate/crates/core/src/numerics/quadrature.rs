use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::ToleranceConfig;
use crate::error::{Error, Result};

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on the number of live subintervals.
const MAX_INTERVALS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err_estimate: f64,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
    res_abs: f64,
    depth: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, depth: usize) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Domain(format!("integrand is not finite at x = {x}")))
        }
    };

    let f_center = eval(center)?;
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { lo, hi, value, err, res_abs, depth })
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` over `[lo, hi]`.
///
/// `hi` may be `f64::INFINITY`; the half line is then mapped onto `[0, 1)`
/// through `s = lo + u/(1-u)`. Intervals are bisected in order of decreasing
/// error until the total error meets `max(quad_abs_tol, quad_rel_tol*|value|)`
/// or the roundoff floor of the rule.
pub fn integrate<F>(f: F, lo: f64, hi: f64, cfg: &ToleranceConfig) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    if !lo.is_finite() || hi.is_nan() || lo >= hi {
        return Err(Error::Domain(format!("invalid integration range [{lo}, {hi}]")));
    }
    if hi.is_infinite() {
        let mapped = |u: f64| {
            let w = 1.0 - u;
            f(lo + u / w) / (w * w)
        };
        adaptive(&mapped, 0.0, 1.0, cfg)
    } else {
        adaptive(&f, lo, hi, cfg)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, cfg: &ToleranceConfig) -> Result<Quadrature> {
    let first = gauss_kronrod(f, lo, hi, 0)?;
    let mut value = first.value;
    let mut err = first.err;
    let mut res_abs = first.res_abs;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    // Segments that hit the depth limit stay in the sums but are not refined.
    let mut frozen_err = 0.0;

    let target = |value: f64, res_abs: f64| {
        cfg.quad_abs_tol.max(cfg.quad_rel_tol * value.abs()).max(100.0 * f64::EPSILON * res_abs)
    };

    while err > target(value, res_abs) {
        let Some(worst) = heap.pop() else {
            return Err(Error::NonConvergence(format!(
                "quadrature on [{lo}, {hi}] exhausted {} subdivision levels (error {err:e})",
                cfg.max_subdivisions
            )));
        };
        if worst.depth >= cfg.max_subdivisions || heap.len() + 2 > MAX_INTERVALS {
            frozen_err += worst.err;
            if frozen_err > target(value, res_abs) {
                return Err(Error::NonConvergence(format!(
                    "quadrature on [{lo}, {hi}] exhausted its subdivision budget (error {err:e})"
                )));
            }
            continue;
        }
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            frozen_err += worst.err;
            continue;
        }
        let left = gauss_kronrod(f, worst.lo, mid, worst.depth + 1)?;
        let right = gauss_kronrod(f, mid, worst.hi, worst.depth + 1)?;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        res_abs += left.res_abs + right.res_abs - worst.res_abs;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from scratch so incremental updates leave no drift.
    let mut total = 0.0;
    let mut total_err = frozen_err;
    let mut parts: Vec<&Segment> = heap.iter().collect();
    parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for seg in parts {
        total += seg.value;
        total_err += seg.err;
    }
    Ok(Quadrature { value: total, err_estimate: total_err })
}
