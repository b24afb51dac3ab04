//! Measure-normalized reparametrization and the projection envelope check.

use super::ambient::AmbientTag;
use super::metric::RevolutionMetric;
use super::profile::ProfileKind;
use crate::quadrature::{integrate_piecewise, GaussRule};
use crate::{Error, Result};

const PANELS: usize = 4096;
const VOLUME_TOL: f64 = 1e-9;

/// The map `α: [0, 1] -> [0, L]` with `ω_{n-1} ∫_0^{α(t)} F^{n-1}(r(s)) ds = t`.
#[derive(Debug, Clone)]
pub struct NormalizedParametrization {
    metric: RevolutionMetric,
    nodes: Vec<f64>,
    cumulative: Vec<f64>,
    rule: GaussRule,
}

/// Builds `α` by inverting the cumulative integral of the invariant weight.
pub fn reparametrize_unit_measure(metric: &RevolutionMetric) -> Result<NormalizedParametrization> {
    if (metric.volume() - 1.0).abs() > VOLUME_TOL {
        return Err(Error::VolumeNotNormalized {
            volume: metric.volume(),
        });
    }
    let l = metric.length();
    let mut nodes: Vec<f64> = (0..=PANELS).map(|i| l * i as f64 / PANELS as f64).collect();
    nodes.extend(metric.breakpoints().iter().copied().filter(|&b| b > 0.0 && b < l));
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup();
    let rule = GaussRule::new(16);
    let mut cumulative = Vec::with_capacity(nodes.len());
    cumulative.push(0.0);
    for w in nodes.windows(2) {
        let inc = rule.integrate(|s| metric.weight(s), w[0], w[1]);
        if !(inc > 0.0) {
            return Err(Error::DegenerateWeight { a: w[0], b: w[1] });
        }
        cumulative.push(cumulative.last().unwrap() + inc);
    }
    Ok(NormalizedParametrization {
        metric: metric.clone(),
        nodes,
        cumulative,
        rule,
    })
}

impl NormalizedParametrization {
    pub fn metric(&self) -> &RevolutionMetric {
        &self.metric
    }

    /// Cumulative measure `ω_{n-1} ∫_0^s F^{n-1}(r)`; the inverse of `α`.
    pub fn measure_at(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.metric.length());
        let i = self.panel_of(s);
        self.cumulative[i] + self.rule.integrate(|x| self.metric.weight(x), self.nodes[i], s)
    }

    fn panel_of(&self, s: f64) -> usize {
        match self.nodes.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i.clamp(1, self.nodes.len() - 1) - 1,
        }
    }

    /// `α(t)`, by safeguarded Newton iteration inside the bracketing panel.
    pub fn alpha(&self, t: f64) -> f64 {
        let total = *self.cumulative.last().unwrap();
        let t = t.clamp(0.0, 1.0) * total;
        let i = match self.cumulative.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return self.nodes[i],
            Err(i) => i.clamp(1, self.nodes.len() - 1) - 1,
        };
        let (mut lo, mut hi) = (self.nodes[i], self.nodes[i + 1]);
        let c0 = self.cumulative[i];
        let mut s = lo + (hi - lo) * (t - c0) / (self.cumulative[i + 1] - c0);
        for _ in 0..100 {
            let g = c0 + self.rule.integrate(|x| self.metric.weight(x), self.nodes[i], s) - t;
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let w = self.metric.weight(s);
            let newton = if w > 0.0 { s - g / w } else { f64::NAN };
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - s).abs() <= 1e-15 * self.metric.length() || hi - lo <= 1e-15 * self.metric.length() {
                return next;
            }
            s = next;
        }
        s
    }

    /// Five-point central difference of `α`, step scaled to the distance from the ends.
    pub fn alpha_derivative(&self, t: f64) -> f64 {
        let d = 1e-3 * t.min(1.0 - t).min(1.0);
        (self.alpha(t - 2.0 * d) - 8.0 * self.alpha(t - d) + 8.0 * self.alpha(t + d) - self.alpha(t + 2.0 * d))
            / (12.0 * d)
    }

    /// `|ω_{n-1} ∫_0^{α(t)} F^{n-1} - t|`, integrated independently of the table.
    pub fn integral_residual(&self, t: f64) -> Result<f64> {
        let a = self.alpha(t);
        let bps: Vec<f64> = self.metric.breakpoints().to_vec();
        let v = integrate_piecewise(|s| self.metric.weight(s), 0.0, a, &bps, 1e-14, 1e-16)?;
        Ok((v.value - t).abs())
    }

    /// `|ω_{n-1} α'(t) F^{n-1}(r(α(t))) - 1|`.
    pub fn derivative_residual(&self, t: f64) -> f64 {
        (self.alpha_derivative(t) * self.metric.weight(self.alpha(t)) - 1.0).abs()
    }

    /// Max of both residuals over the interior grid `i / points`.
    pub fn max_residuals(&self, points: usize) -> Result<(f64, f64)> {
        let mut integral: f64 = 0.0;
        let mut derivative: f64 = 0.0;
        for i in 1..points {
            let t = i as f64 / points as f64;
            integral = integral.max(self.integral_residual(t)?);
            derivative = derivative.max(self.derivative_residual(t));
        }
        Ok((integral, derivative))
    }
}

/// Outcome of [`envelope_check`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnvelopeCheck {
    pub pass: bool,
    /// Largest `F − bound` on the grid; nonpositive when the check passes.
    pub max_violation: f64,
    /// Largest `bound − F`; zero only when the bound is attained everywhere.
    pub max_slack: f64,
}

/// Grid size of the envelope check.
pub const ENVELOPE_POINTS: usize = 1000;
/// Violations up to this size still pass.
pub const ENVELOPE_TOL: f64 = 1e-9;

/// Checks `F(r(α(t))) ≤ min(t, 1 - t)^{1/n} (n/ω_{n-1})^{1/n}` on a grid.
///
/// Projecting the cap `{s ≤ α(t)}` onto the hyperplane orthogonal to the
/// axis shrinks volume, so the cap's boundary sphere bounds a flat ball of
/// volume at most `t`.
pub fn envelope_check(metric: &RevolutionMetric) -> Result<EnvelopeCheck> {
    if metric.ambient() != Some(AmbientTag::Euclidean) {
        return Err(Error::WrongAmbient {
            expected: "euclidean",
            found: metric.ambient().map_or("abstract".into(), |t| t.to_string()),
        });
    }
    if metric.kind() != ProfileKind::SphereLike {
        return Err(Error::InvalidParameter("envelope check needs a sphere-like profile".into()));
    }
    let param = reparametrize_unit_measure(metric)?;
    let n = metric.n() as f64;
    let c = (n / metric.omega()).powf(1.0 / n);
    let diffs: Vec<f64> = (1..ENVELOPE_POINTS)
        .map(|i| {
            let t = i as f64 / ENVELOPE_POINTS as f64;
            let bound = t.min(1.0 - t).powf(1.0 / n) * c;
            metric.radius(param.alpha(t)) - bound
        })
        .collect();
    let max_violation = diffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_slack = -diffs.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(EnvelopeCheck {
        pass: max_violation <= ENVELOPE_TOL,
        max_violation,
        max_slack,
    })
}
