use std::f64::consts::PI;

use serde::Serialize;

use super::{FlowEvent, FlowTrack};
use crate::error::{Error, Result};
use crate::numerics::{extrapolate_limit, ToleranceConfig};

/// Allowed decrease of the Hawking mass, relative to `max(1, |m_H|)`.
const GEROCH_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GerochReport {
    pub monotone: bool,
    /// Largest decrease of m_H between consecutive samples or across a jump
    /// (zero when m_H never decreases).
    pub worst_drop: f64,
    pub hawking: Vec<f64>,
}

/// Checks that the Hawking mass never decreases along the track, sample to
/// sample and across every jump.
pub fn geroch_check(track: &FlowTrack) -> GerochReport {
    let hawking: Vec<f64> = track.samples.iter().map(|s| s.sphere.hawking_mass).collect();
    let mut pairs: Vec<(f64, f64)> = hawking.windows(2).map(|w| (w[0], w[1])).collect();
    for e in &track.events {
        if let FlowEvent::Jump { hawking_before, hawking_after, .. } = *e {
            pairs.push((hawking_before, hawking_after));
        }
    }
    let mut monotone = true;
    let mut worst_drop = 0.0f64;
    for (before, after) in pairs {
        let drop = before - after;
        worst_drop = worst_drop.max(drop);
        if !(after >= before - GEROCH_SLACK * before.abs().max(1.0)) {
            monotone = false;
        }
    }
    GerochReport { monotone, worst_drop, hawking }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WillmoreLimit {
    pub limit_estimate: f64,
    /// `limit_estimate − 16π`.
    pub deviation: f64,
    pub err_estimate: f64,
}

/// Extrapolated limit of the Willmore energy over the final `tail_fraction`
/// of the samples.
pub fn willmore_limit(track: &FlowTrack, tail_fraction: f64, cfg: &ToleranceConfig) -> Result<WillmoreLimit> {
    let n = track.samples.len();
    if n < 10 {
        return Err(Error::InsufficientData { needed: 10, got: n });
    }
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(Error::Domain(format!("tail_fraction must lie in (0, 1), got {tail_fraction}")));
    }
    let take = ((n as f64) * tail_fraction).ceil() as usize;
    let tail: Vec<(f64, f64)> = track.samples[n - take..].iter().map(|s| (s.t, s.sphere.willmore)).collect();
    let ex = extrapolate_limit(&tail, cfg)?;
    Ok(WillmoreLimit { limit_estimate: ex.limit, deviation: ex.limit - 16.0 * PI, err_estimate: ex.err_estimate })
}
