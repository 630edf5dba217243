use super::ToleranceConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub limit: f64,
    pub err_estimate: f64,
    /// Acceleration broke down and the raw final value was returned.
    pub diverged: bool,
}

/// Estimate the limit of a sequence sampled at increasing parameters.
///
/// Iterated Aitken Δ² on the last `extrap_terms` entries. Two variants run
/// side by side: the classical index form, exact for `v + c·qⁿ`, and a
/// parameter-aware form that fits `v + c·x^(-k)` with `k` solved from each
/// triple. On geometric parameter grids both reduce to the same formula; on
/// other grids the power fit also captures algebraic decay such as `1/n`.
/// Stages are iterated while the inter-stage difference keeps shrinking; the
/// variant whose final stage is most nearly constant wins. If neither variant
/// survives its first stage, the raw final value is returned together with
/// the last raw difference.
pub fn extrapolate_limit(seq: &[(f64, f64)], cfg: &ToleranceConfig) -> Result<Extrapolation> {
    if seq.len() < cfg.extrap_terms {
        return Err(Error::InsufficientData { needed: cfg.extrap_terms, got: seq.len() });
    }
    if seq.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::Domain("extrapolation parameters must be strictly increasing".into()));
    }
    if seq.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::Domain("extrapolation data must be finite".into()));
    }
    let tail = &seq[seq.len() - cfg.extrap_terms..];

    let classical = iterate(tail, aitken_index);
    let power = if tail.iter().all(|&(x, _)| x > 0.0) { iterate(tail, aitken_power) } else { None };
    let best = match (classical, power) {
        (Some(c), Some(p)) => Some(if p.spread < c.spread { p } else { c }),
        (c, p) => c.or(p),
    };
    Ok(match best {
        Some(s) => Extrapolation { limit: s.limit, err_estimate: s.err, diverged: false },
        None => {
            let n = tail.len();
            Extrapolation { limit: tail[n - 1].1, err_estimate: (tail[n - 1].1 - tail[n - 2].1).abs(), diverged: true }
        }
    })
}

type Step = fn([(f64, f64); 3]) -> Option<f64>;

struct Stage {
    limit: f64,
    /// Last inter-stage difference.
    err: f64,
    /// Difference of the last two entries within the stage.
    spread: f64,
}

/// Runs the stages of one variant; `None` when the first stage already fails.
fn iterate(tail: &[(f64, f64)], step: Step) -> Option<Stage> {
    let mut stage: Vec<(f64, f64)> = tail.to_vec();
    let mut best: Option<Stage> = None;
    while stage.len() >= 3 {
        let mut next = Vec::with_capacity(stage.len() - 2);
        for w in stage.windows(3) {
            match step([w[0], w[1], w[2]]) {
                Some(v) if v.is_finite() => next.push((w[2].0, v)),
                _ => return best,
            }
        }
        let last_prev = stage[stage.len() - 1].1;
        let last = next[next.len() - 1].1;
        let diff = (last - last_prev).abs();
        if let Some(prev) = &best {
            if diff > prev.err {
                break;
            }
        }
        let spread = if next.len() >= 2 { (last - next[next.len() - 2].1).abs() } else { diff };
        best = Some(Stage { limit: last, err: diff, spread });
        stage = next;
    }
    best
}

fn aitken_index(t: [(f64, f64); 3]) -> Option<f64> {
    let (y0, y1, y2) = (t[0].1, t[1].1, t[2].1);
    let d0 = y1 - y0;
    let d1 = y2 - y1;
    if d0 == 0.0 && d1 == 0.0 {
        return Some(y2);
    }
    let dd = d1 - d0;
    if dd == 0.0 {
        return None;
    }
    Some(y2 - d1 * d1 / dd)
}

fn aitken_power(t: [(f64, f64); 3]) -> Option<f64> {
    let [(x0, y0), (x1, y1), (x2, y2)] = t;
    let d0 = y1 - y0;
    let d1 = y2 - y1;
    if d0 == 0.0 && d1 == 0.0 {
        return Some(y2);
    }
    if d0 == 0.0 || d1 == 0.0 {
        return None;
    }
    let ratio = d1 / d0;
    let l21 = (x2 / x1).ln();
    let l10 = (x1 / x0).ln();
    // g(k) = (x1^-k - x2^-k) / (x0^-k - x1^-k), decreasing from l21/l10 to 0.
    let g = |k: f64| {
        let e21 = (k * l21).exp_m1();
        e21 / ((1.0 + e21) * (k * l10).exp_m1())
    };
    if !(ratio > 0.0 && ratio < l21 / l10) {
        return None;
    }
    let k_max = (600.0 / (l21 + l10)).min(1e3);
    let (mut lo, mut hi) = (1e-9_f64, k_max);
    if g(hi) >= ratio {
        // Faster than any representable power: the last value is the limit.
        return Some(y2 + d1 / (hi * l21).exp_m1());
    }
    if g(lo) <= ratio {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > ratio {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    let k = 0.5 * (lo + hi);
    Some(y2 + d1 / (k * l21).exp_m1())
}
