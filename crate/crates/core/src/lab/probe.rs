//! Finite-difference probe of the extremality criterion: along a
//! volume-preserving family `g_ε`, estimate the one-sided derivatives of
//! `λ_k^G(g_ε)` at `ε = 0`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::report::{DerivativeEstimate, ProbeReport};
use crate::geometry::{induced_metric, AmbientSpace, ProfileCurve, RevolutionMetric};
use crate::sl::invariant_spectrum;
use crate::{Error, Result};

pub const DEFAULT_STEP: f64 = 0.02;
pub const PROBE_TOL: f64 = 1e-10;
const VOLUME_CHANGE_TOL: f64 = 1e-8;
const CROSSING_GAP: f64 = 1e-6;
const MAX_RETRIES: usize = 3;

/// One-parameter families through the round `S²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeFamily {
    /// Spheroids with semi-axes `e^ε`, `e^{-ε}`, rescaled to area `4π`.
    Spheroid,
    /// The round sphere translated along the axis by `ε`.
    Isometric,
    /// `(1 + ε) g`; changes the volume and is rejected.
    Homothety,
}

impl FromStr for ProbeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "spheroid" => Ok(ProbeFamily::Spheroid),
            "isometric" => Ok(ProbeFamily::Isometric),
            "homothety" | "rescaled" => Ok(ProbeFamily::Homothety),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for ProbeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProbeFamily::Spheroid => "spheroid",
            ProbeFamily::Isometric => "isometric",
            ProbeFamily::Homothety => "homothety",
        })
    }
}

impl ProbeFamily {
    pub fn metric(self, eps: f64) -> Result<RevolutionMetric> {
        let euclid = AmbientSpace::euclidean();
        let round = ProfileCurve::round_sphere();
        match self {
            ProbeFamily::Spheroid => {
                if eps == 0.0 {
                    return induced_metric(&round, &euclid, 2);
                }
                let g = induced_metric(&ProfileCurve::spheroid(eps.exp(), (-eps).exp())?, &euclid, 2)?;
                let c = (4.0 * std::f64::consts::PI / g.volume()).sqrt();
                g.scaled(c)
            }
            ProbeFamily::Isometric => induced_metric(&round.shifted(eps), &euclid, 2),
            ProbeFamily::Homothety => induced_metric(&round, &euclid, 2)?.scaled(1.0 + eps),
        }
    }
}

struct Sample {
    eps: f64,
    lambda: f64,
    gap: f64,
}

fn sample(family: ProbeFamily, k: usize, eps: f64, volume0: f64) -> Result<Sample> {
    let g = family.metric(eps)?;
    let change = (g.volume() - volume0).abs() / volume0;
    if change > VOLUME_CHANGE_TOL {
        return Err(Error::VolumeNotPreserved {
            eps,
            relative_change: change,
        });
    }
    let s = invariant_spectrum(&g, k + 1, PROBE_TOL)?;
    let l = &s.eigenvalues;
    let below = if k >= 1 { l[k] - l[k - 1] } else { f64::INFINITY };
    let gap = below.min(l[k + 1] - l[k]) / l[k].abs().max(f64::MIN_POSITIVE);
    Ok(Sample {
        eps,
        lambda: l[k],
        gap,
    })
}

/// One-sided second-order differences at steps `h, h/2, h/4`; the estimate
/// is the finest one and its error bar the change from the previous step.
pub fn extremality_probe(family: ProbeFamily, k: usize, step: f64) -> Result<ProbeReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("step {step} must be positive")));
    }
    let volume0 = family.metric(0.0)?.volume();
    let mut h = step;
    for _ in 0..=MAX_RETRIES {
        let mut grid: Vec<f64> = [0.25, 0.5, 1.0, 2.0]
            .iter()
            .flat_map(|m| [-m * h, m * h])
            .collect();
        grid.push(0.0);
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let samples = grid
            .par_iter()
            .map(|&e| sample(family, k, e, volume0))
            .collect::<Result<Vec<_>>>()?;
        if samples.iter().any(|s| s.gap < CROSSING_GAP) {
            h *= 0.5;
            continue;
        }
        let f = |e: f64| {
            samples
                .iter()
                .find(|s| (s.eps - e).abs() <= 1e-15 * h)
                .map(|s| s.lambda)
                .unwrap()
        };
        let f0 = f(0.0);
        let right = |s: f64| (-3.0 * f0 + 4.0 * f(s) - f(2.0 * s)) / (2.0 * s);
        let left = |s: f64| (3.0 * f0 - 4.0 * f(-s) + f(-2.0 * s)) / (2.0 * s);
        // eigenvalue noise amplified by the finest stencil
        let noise = 8.0 * PROBE_TOL * f0.abs() / (0.5 * h);
        let estimate = |d: &dyn Fn(f64) -> f64| DerivativeEstimate {
            value: d(0.25 * h),
            error: (d(0.5 * h) - d(0.25 * h)).abs() + noise,
        };
        let l = estimate(&left);
        let r = estimate(&right);
        let both = l.exceeds_error() && r.exceeds_error();
        let zero = |d: &DerivativeEstimate| d.value.abs() <= 3.0 * d.error + 1e-9;
        return Ok(ProbeReport {
            family: family.to_string(),
            k,
            epsilons: samples.iter().map(|s| s.eps).collect(),
            lambdas: samples.iter().map(|s| s.lambda).collect(),
            step: h,
            left: l,
            right: r,
            product: both.then(|| l.value * r.value),
            non_extremal_witness: both && l.value * r.value > 0.0,
            zero_within_error: zero(&l) && zero(&r),
        });
    }
    Err(Error::UnresolvedCrossing)
}
