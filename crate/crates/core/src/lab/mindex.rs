//! Position `m(k, g)` of the `k`-th invariant eigenvalue in the full spectrum.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{SweepKind, SweepReport, SweepRow};
use crate::geometry::{induced_metric, AmbientSpace, ProfileCurve, RevolutionMetric};
use crate::sl::{harmonic_multiplicity, invariant_spectrum, mode_spectrum};
use crate::{Error, Result};

/// Relative gap below which two eigenvalues count as equal.
pub const TIE_GAP: f64 = 1e-9;
pub const MINDEX_TOL: f64 = 1e-10;
const RADIUS_SAMPLES: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MIndex {
    pub k: usize,
    pub m: usize,
    pub lambda_k: f64,
    pub l_max: usize,
    /// Lower bound for every eigenvalue of degree above `l_max`.
    pub lower_bound: f64,
    /// Eigenvalues counted below `λ_k^G`, per degree `0..=l_max`, with
    /// multiplicity.
    pub per_degree: Vec<u64>,
}

fn max_radius(metric: &RevolutionMetric) -> f64 {
    let l = metric.length();
    let mut pts: Vec<f64> = (0..=RADIUS_SAMPLES).map(|i| l * i as f64 / RADIUS_SAMPLES as f64).collect();
    pts.extend_from_slice(metric.breakpoints());
    pts.iter().map(|&t| metric.radius(t)).fold(0.0, f64::max)
}

/// `(ℓ+1)(ℓ+n-1) / max F²`, a lower bound for all degrees above `ℓ`.
pub fn degree_lower_bound(metric: &RevolutionMetric, l_max: usize) -> f64 {
    let n = metric.n();
    let f = max_radius(metric);
    ((l_max + 1) * (l_max + n - 1)) as f64 / (f * f)
}

/// Smallest `ℓ_max` whose degree bound certifies `target`.
pub fn certified_l_max(metric: &RevolutionMetric, target: f64) -> usize {
    let mut l = 0;
    while degree_lower_bound(metric, l) <= target * (1.0 + TIE_GAP) {
        l += 1;
    }
    l
}

/// Counts degree-`ℓ` eigenvalues strictly below `threshold`.
fn count_below(metric: &RevolutionMetric, l: usize, threshold: f64, start: usize) -> Result<usize> {
    let mut want = start.max(1);
    loop {
        let s = mode_spectrum(metric, l, want - 1, MINDEX_TOL)?;
        let below = s.eigenvalues.iter().filter(|&&v| v < threshold).count();
        if below < s.eigenvalues.len() {
            return Ok(below);
        }
        want *= 2;
    }
}

/// `m(k, g)`: the number of full-spectrum eigenvalues (with multiplicity,
/// `λ_0 = 0` included) strictly below `λ_k^G`, so that `λ_k^G = λ_m`.
pub fn m_index(metric: &RevolutionMetric, k: usize, l_max: usize) -> Result<MIndex> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let lambda_k = invariant_spectrum(metric, k, MINDEX_TOL)?.eigenvalues[k];
    let lower_bound = degree_lower_bound(metric, l_max);
    if !(lower_bound > lambda_k * (1.0 + TIE_GAP)) {
        return Err(Error::InsufficientModes {
            l_max,
            lower_bound,
            target: lambda_k,
        });
    }
    let threshold = lambda_k * (1.0 - TIE_GAP);
    let n = metric.n();
    let per_degree = (0..=l_max)
        .into_par_iter()
        .map(|l| {
            let c = count_below(metric, l, threshold, k + 2)?;
            Ok(c as u64 * harmonic_multiplicity(n, l))
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(MIndex {
        k,
        m: per_degree.iter().sum::<u64>() as usize,
        lambda_k,
        l_max,
        lower_bound,
        per_degree,
    })
}

/// As [`m_index`] with the smallest certified `ℓ_max`.
pub fn m_index_auto(metric: &RevolutionMetric, k: usize) -> Result<MIndex> {
    let lambda_k = invariant_spectrum(metric, k, MINDEX_TOL)?.eigenvalues[k];
    m_index(metric, k, certified_l_max(metric, lambda_k))
}

/// Independent count for the flat product `S^1 × S^1_R`: lattice points
/// `(a, b)` with `a² + b²/R² < 1`, which is `m(1)`.
pub fn product_lattice_count(big_r: f64) -> usize {
    let b_max = big_r.ceil() as i64;
    let mut count = 0;
    for a in -1i64..=1 {
        for b in -b_max..=b_max {
            let v = (a * a) as f64 + (b * b) as f64 / (big_r * big_r);
            if v < 1.0 - TIE_GAP {
                count += 1;
            }
        }
    }
    count
}

/// Families with a degeneration parameter for escalation sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EscalationFamily {
    /// Flat `S^1 × S^1_R`, parameter `R`.
    Product,
    /// Torus of revolution `T_R`, parameter `R`.
    Torus,
    /// Round sphere of radius `r`; `m(1)` does not depend on `r`.
    Round,
}

impl FromStr for EscalationFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "product" => Ok(EscalationFamily::Product),
            "torus" => Ok(EscalationFamily::Torus),
            "round" | "round_sphere" => Ok(EscalationFamily::Round),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

impl EscalationFamily {
    pub fn metric(self, parameter: f64) -> Result<RevolutionMetric> {
        let euclid = AmbientSpace::euclidean();
        match self {
            EscalationFamily::Product => RevolutionMetric::flat_product(2, parameter),
            EscalationFamily::Torus => induced_metric(&ProfileCurve::torus(parameter)?, &euclid, 2),
            EscalationFamily::Round => {
                if !(parameter > 0.0) {
                    return Err(Error::InvalidParameter(format!("radius {parameter} must be positive")));
                }
                induced_metric(&ProfileCurve::round_sphere(), &euclid, 2)?.scaled(parameter)
            }
        }
    }
}

/// `m(1, g)` along a family; the summary records the first parameter with
/// `m(1, g) > N` (NaN if none).
pub fn m_escalation(family: EscalationFamily, parameters: &[f64], threshold: usize) -> Result<SweepReport> {
    if parameters.is_empty() {
        return Err(Error::InvalidParameter("the parameter grid is empty".into()));
    }
    if parameters.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("parameters must be strictly increasing".into()));
    }
    let rows = parameters
        .par_iter()
        .map(|&p| {
            let metric = family.metric(p)?;
            let mi = m_index_auto(&metric, 1)?;
            Ok(SweepRow {
                parameter: p,
                lambda: mi.lambda_k,
                volume: metric.volume(),
                product: metric.normalize_eigenvalue(mi.lambda_k),
                aux: vec![mi.m as f64, f64::from(u8::from(mi.m > threshold))],
                converged: true,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport::new(SweepKind::Escalation, 2, rows);
    let first = report
        .rows
        .iter()
        .find(|r| r.aux[1] > 0.5)
        .map_or(f64::NAN, |r| r.parameter);
    report.summary.insert("threshold".into(), threshold as f64);
    report.summary.insert("first_exceeding".into(), first);
    Ok(report)
}
