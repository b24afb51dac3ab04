//! Conformal concentration on a flat torus.
//!
//! The flat torus `R/Z × T^{n-1}` (orbit volume 1) carries the metric
//! `e^{2u(x)}(dx² + dy²)`. Inside an interval of length `δ^n` the factor is
//! `1/δ²`, so that piece has volume 1; outside it is `ε/δ²`. Invariant
//! functions `f(x)` see the weight `e^{nu}` and the conduction `e^{(n-2)u}`.
//! As `ε → 0` the first invariant eigenvalue tends to the Neumann eigenvalue
//! `π² δ^{2-2n}` of the concentrated piece.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use super::report::{SweepKind, SweepReport, SweepRow};
use crate::quadrature::GaussRule;
use crate::sl::{refine_from, refine_until, EndCondition, Mesh, SLProblem};
use crate::{Error, Result};

pub const DEFAULT_DELTAS: [f64; 6] = [0.5, 0.4, 0.3, 0.2, 0.1, 0.05];
pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_SMOOTHING: f64 = 1e-3;
/// Refinement tolerance; the weight spans many orders of magnitude and
/// bisection roundoff sits near 1e-8.
pub const CONCENTRATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationConfig {
    pub n: usize,
    pub deltas: Vec<f64>,
    pub eps: f64,
    /// Width of the transition layer as a fraction of the concentration interval.
    pub smoothing: f64,
    /// Keep the conformal factor constant (control experiment).
    pub flat: bool,
    pub tol: f64,
}

impl Default for ConcentrationConfig {
    fn default() -> Self {
        ConcentrationConfig {
            n: 3,
            deltas: DEFAULT_DELTAS.to_vec(),
            eps: DEFAULT_EPS,
            smoothing: DEFAULT_SMOOTHING,
            flat: false,
            tol: CONCENTRATION_TOL,
        }
    }
}

/// The log conformal factor `u(x)` for one `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalFactor {
    pub n: usize,
    pub delta: f64,
    pub eps: f64,
    pub smoothing: f64,
    pub flat: bool,
}

impl ConformalFactor {
    pub fn new(n: usize, delta: f64, eps: f64, smoothing: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("concentration needs n >= 3, got {n}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
        }
        if !(eps > 0.0) || !(eps / (delta * delta) < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eps = {eps} must be positive with eps/delta² < 1"
            )));
        }
        if !(smoothing > 0.0) {
            return Err(Error::InvalidParameter(format!("smoothing width {smoothing} must be positive")));
        }
        if smoothing >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "smoothing width {smoothing} is not smaller than the concentration interval"
            )));
        }
        Ok(ConformalFactor {
            n,
            delta,
            eps,
            smoothing,
            flat: false,
        })
    }

    pub fn flat(n: usize) -> Self {
        ConformalFactor {
            n,
            delta: 0.5,
            eps: 0.25,
            smoothing: DEFAULT_SMOOTHING,
            flat: true,
        }
    }

    /// Length `δ^n` of the concentration interval, centred at `x = 1/2`.
    pub fn interval_length(&self) -> f64 {
        self.delta.powi(self.n as i32)
    }

    fn layer(&self) -> f64 {
        self.smoothing * self.interval_length()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        if self.flat {
            return Vec::new();
        }
        let half = 0.5 * self.interval_length();
        let s = self.layer();
        vec![0.5 - half - s, 0.5 - half, 0.5 + half, 0.5 + half + s]
    }

    pub fn u(&self, x: f64) -> f64 {
        if self.flat {
            return 0.0;
        }
        let inside = -self.delta.ln();
        let outside = 0.5 * (self.eps / (self.delta * self.delta)).ln();
        let d = (x - 0.5).abs() - 0.5 * self.interval_length();
        if d <= 0.0 {
            return inside;
        }
        let z = d / self.layer();
        if z >= 1.0 {
            return outside;
        }
        let s = z * z * (3.0 - 2.0 * z);
        inside + (outside - inside) * s
    }

    pub fn weight(&self, x: f64) -> f64 {
        (self.n as f64 * self.u(x)).exp()
    }

    pub fn conduction(&self, x: f64) -> f64 {
        ((self.n as f64 - 2.0) * self.u(x)).exp()
    }

    /// `∫ e^{nu}`: exact on the constant pieces, composite Gauss on the
    /// transition layers.
    pub fn volume(&self) -> f64 {
        if self.flat {
            return 1.0;
        }
        let len = self.interval_length();
        let s = self.layer();
        let outside = (1.0 - len - 2.0 * s) * self.weight(0.0);
        let rule = GaussRule::new(16);
        let b = self.breakpoints();
        let panels = 16;
        let layer: f64 = (0..panels)
            .map(|j| {
                let a = b[0] + s * j as f64 / panels as f64;
                rule.integrate(|x| self.weight(x), a, a + s / panels as f64)
            })
            .sum();
        // the two layers are mirror images
        outside + 1.0 + 2.0 * layer
    }

    pub fn problem(&self) -> SLProblem {
        let (a, b) = (*self, *self);
        SLProblem::circle(1.0, Arc::new(move |x| a.weight(x)))
            .with_conduction(Arc::new(move |x| b.conduction(x)))
            .with_breakpoints(self.breakpoints())
    }

    /// Starting mesh resolving the interval and both transition layers.
    pub fn mesh(&self) -> Result<Mesh> {
        if self.flat {
            return Mesh::uniform(1.0, 64);
        }
        let mut cuts = vec![0.0];
        cuts.extend(self.breakpoints());
        cuts.push(1.0);
        let counts = [32, 8, 64, 8, 32];
        let mut nodes = vec![0.0];
        for (w, m) in cuts.windows(2).zip(counts) {
            for j in 1..=m {
                nodes.push(w[0] + (w[1] - w[0]) * j as f64 / m as f64);
            }
        }
        *nodes.last_mut().unwrap() = 1.0;
        Mesh::from_nodes(nodes)
    }

    /// `π² δ^{2-2n}`: first Neumann eigenvalue of the concentrated piece,
    /// which has unit volume.
    pub fn neumann_limit(&self) -> f64 {
        PI * PI * self.delta.powi(2 - 2 * self.n as i32)
    }
}

/// First nonzero Neumann eigenvalue of the concentrated interval, solved
/// directly with the inside coefficients.
pub fn neumann_piece_eigenvalue(n: usize, delta: f64, tol: f64) -> Result<f64> {
    let u = -delta.ln();
    let w = (n as f64 * u).exp();
    let p = ((n as f64 - 2.0) * u).exp();
    let length = delta.powi(n as i32);
    let problem = SLProblem::interval(length, Arc::new(move |_| w))
        .with_conduction(Arc::new(move |_| p))
        .with_conditions(EndCondition::Neumann, EndCondition::Neumann);
    Ok(refine_until(&problem, 1, tol)?.eigenvalues[1])
}

/// One `(λ_1, Vol)` pair for the given factor.
pub fn concentration_point(factor: &ConformalFactor, tol: f64) -> Result<(f64, f64, bool)> {
    let s = refine_from(&factor.problem(), factor.mesh()?, 1, tol)?;
    Ok((s.eigenvalues[1], factor.volume(), s.converged))
}

/// Sweep over decreasing `δ`. The summary holds the log-log slope of
/// `λ_1 · Vol^{2/n}` against `δ` over the final decade and the growth
/// factor across it.
pub fn concentration_experiment(config: &ConcentrationConfig) -> Result<SweepReport> {
    let n = config.n;
    if config.deltas.is_empty() {
        return Err(Error::InvalidParameter("the delta grid is empty".into()));
    }
    if config.deltas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("delta values must be strictly decreasing".into()));
    }
    let factors = config
        .deltas
        .iter()
        .map(|&d| {
            let mut f = ConformalFactor::new(n, d, config.eps, config.smoothing)?;
            f.flat = config.flat;
            Ok(f)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = factors
        .par_iter()
        .map(|f| {
            let (lambda, volume, converged) = concentration_point(f, config.tol)?;
            let product = lambda * volume.powf(2.0 / n as f64);
            let limit = f.neumann_limit();
            Ok(SweepRow {
                parameter: f.delta,
                lambda,
                volume,
                product,
                aux: vec![limit, product / limit],
                converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport::new(SweepKind::Concentration, n, rows);
    if let Some((slope, growth)) = final_decade_fit(&report) {
        report.summary.insert("final_decade_slope".into(), slope);
        report.summary.insert("final_decade_growth".into(), growth);
    }
    Ok(report)
}

/// Least-squares slope of `log product` against `log δ` over rows with
/// `δ ≤ 10 δ_min`, and the growth factor between the ends of that range.
pub fn final_decade_fit(report: &SweepReport) -> Option<(f64, f64)> {
    let d_min = report.rows.last()?.parameter;
    let pts: Vec<(f64, f64)> = report
        .rows
        .iter()
        .filter(|r| r.parameter <= 10.0 * d_min * (1.0 + 1e-12))
        .map(|r| (r.parameter.ln(), r.product.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    let growth = (pts[pts.len() - 1].1 - pts[0].1).exp();
    Some((num / den, growth))
}
