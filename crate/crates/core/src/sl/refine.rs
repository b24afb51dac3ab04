//! Nested mesh refinement with Richardson extrapolation.

use serde::{Deserialize, Serialize};

use super::assemble::assemble;
use super::eigen::smallest_eigenvalues;
use super::mesh::{Mesh, GRADING_LAYERS, GRADING_RATIO};
use super::problem::SLProblem;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const MIN_TOL: f64 = 1e-10;
pub const MAX_ELEMENTS: usize = 1 << 20;
const BASE_ELEMENTS: usize = 32;
const MIN_LEVELS: usize = 3;
/// Levels after which growing extrapolated changes mean roundoff dominates.
const STAGNATION_LEVELS: usize = 6;

/// Ordered eigenvalues `λ_0 ≤ … ≤ λ_k` with error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub error_estimates: Vec<f64>,
    pub elements: usize,
    pub converged: bool,
    /// Observed convergence order of the raw discrete eigenvalues.
    #[serde(skip)]
    pub observed_order: Option<f64>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest error estimate relative to the eigenvalue, ignoring zero modes.
    pub fn max_relative_error(&self) -> f64 {
        let top = self.eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        self.eigenvalues
            .iter()
            .zip(&self.error_estimates)
            .filter(|(v, _)| v.abs() > 1e-9 * top)
            .map(|(v, e)| e / v.abs())
            .fold(0.0, f64::max)
    }
}

/// The `count` smallest discrete eigenvalues on a fixed mesh.
pub fn discrete_eigenvalues(problem: &SLProblem, mesh: &Mesh, count: usize) -> Result<Vec<f64>> {
    let pencil = assemble(problem, mesh)?;
    smallest_eigenvalues(&pencil, count)
}

/// Eigenvalues `λ_0..=λ_k` on `mesh`; each error estimate compares with one
/// extra halving, `(4/3)|λ_h − λ_{h/2}|`.
pub fn solve_spectrum(problem: &SLProblem, mesh: &Mesh, k: usize) -> Result<SpectrumResult> {
    problem.validate()?;
    let coarse = discrete_eigenvalues(problem, mesh, k + 1)?;
    let fine = discrete_eigenvalues(problem, &mesh.refined(), k + 1)?;
    Ok(SpectrumResult {
        error_estimates: coarse.iter().zip(&fine).map(|(a, b)| 4.0 / 3.0 * (a - b).abs()).collect(),
        eigenvalues: coarse,
        elements: mesh.elements(),
        converged: true,
        observed_order: None,
    })
}

/// Starting mesh: nodes at the problem's breakpoints, geometric layers at
/// singular endpoints, enough elements for `count` eigenvalues.
pub fn initial_mesh(problem: &SLProblem, count: usize) -> Result<Mesh> {
    let domain = problem.domain();
    let elements = BASE_ELEMENTS.max(4 * count);
    let mesh = Mesh::with_breakpoints(domain.length(), problem.breakpoints(), elements)?;
    if domain.is_periodic() {
        return Ok(mesh);
    }
    let (left, right) = problem.singular_ends();
    mesh.graded(left, right, GRADING_RATIO, GRADING_LAYERS)
}

/// Refines from the default starting mesh until every eigenvalue
/// `λ_0..=λ_k` is stable to `tol` relative after extrapolation.
pub fn refine_until(problem: &SLProblem, k: usize, tol: f64) -> Result<SpectrumResult> {
    let mesh = initial_mesh(problem, k + 1)?;
    refine_from(problem, mesh, k, tol)
}

/// As [`refine_until`], starting from a caller-supplied mesh.
pub fn refine_from(problem: &SLProblem, mesh: Mesh, k: usize, tol: f64) -> Result<SpectrumResult> {
    if !(tol >= MIN_TOL) || !tol.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be at least {MIN_TOL}"
        )));
    }
    problem.validate()?;
    let count = k + 1;
    let mut mesh = mesh;
    let mut raw: Vec<Vec<f64>> = Vec::new();
    let mut extrapolated: Vec<Vec<f64>> = Vec::new();
    let mut changes: Vec<f64> = Vec::new();
    loop {
        let lam = discrete_eigenvalues(problem, &mesh, count)?;
        if let Some(prev) = raw.last() {
            let r: Vec<f64> = lam.iter().zip(prev).map(|(f, c)| (4.0 * f - c) / 3.0).collect();
            extrapolated.push(r);
        }
        raw.push(lam);
        let levels = raw.len();
        if levels >= MIN_LEVELS && extrapolated.len() >= 2 {
            let cur = &extrapolated[extrapolated.len() - 1];
            let prev = &extrapolated[extrapolated.len() - 2];
            let top = cur.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let done = cur.iter().zip(prev).all(|(a, b)| {
                if a.abs() <= 1e-9 * top && b.abs() <= 1e-9 * top {
                    return true;
                }
                (a - b).abs() <= tol * a.abs().max(1e-3 * top)
            });
            if done {
                return Ok(finish(&raw, &extrapolated, mesh.elements(), true));
            }
            let change = cur
                .iter()
                .zip(prev)
                .filter(|(a, _)| a.abs() > 1e-9 * top)
                .map(|(a, b)| (a - b).abs() / a.abs())
                .fold(0.0, f64::max);
            changes.push(change);
            let c = changes.len();
            if levels > STAGNATION_LEVELS && c >= 3 && changes[c - 1] > changes[c - 2] && changes[c - 2] > changes[c - 3] {
                return Ok(finish(&raw, &extrapolated, mesh.elements(), false));
            }
        }
        if mesh.elements() * 2 > MAX_ELEMENTS {
            return Ok(finish(&raw, &extrapolated, mesh.elements(), false));
        }
        mesh = mesh.refined();
    }
}

fn finish(raw: &[Vec<f64>], extrapolated: &[Vec<f64>], elements: usize, converged: bool) -> SpectrumResult {
    let last_raw = raw.last().unwrap();
    let (values, errors) = match extrapolated.len() {
        0 => (last_raw.clone(), vec![f64::INFINITY; last_raw.len()]),
        1 => {
            let r = &extrapolated[0];
            let e = r.iter().zip(last_raw).map(|(a, b)| (a - b).abs()).collect();
            (r.clone(), e)
        }
        n => {
            let (cur, prev) = (&extrapolated[n - 1], &extrapolated[n - 2]);
            let e = cur.iter().zip(prev).map(|(a, b)| (a - b).abs()).collect();
            (cur.clone(), e)
        }
    };
    let mut eigenvalues = values;
    let mut floor = 0.0_f64;
    for v in eigenvalues.iter_mut() {
        *v = v.max(floor);
        floor = *v;
    }
    SpectrumResult {
        eigenvalues,
        error_estimates: errors,
        elements,
        converged,
        observed_order: observed_order(raw),
    }
}

fn observed_order(raw: &[Vec<f64>]) -> Option<f64> {
    let n = raw.len();
    if n < 3 {
        return None;
    }
    let last = &raw[n - 1];
    let top = last.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let idx = last.iter().position(|v| v.abs() > 1e-9 * top)?;
    let d1 = (raw[n - 2][idx] - raw[n - 3][idx]).abs();
    let d2 = (raw[n - 1][idx] - raw[n - 2][idx]).abs();
    (d1 > 0.0 && d2 > 0.0).then(|| (d1 / d2).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl::{Domain, EndCondition};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn neumann_unit_interval() {
        let p = SLProblem::constant(Domain::Interval { length: 1.0 })
            .with_conditions(EndCondition::Neumann, EndCondition::Neumann);
        let s = refine_until(&p, 3, 1e-6).unwrap();
        assert!(s.converged);
        assert!(s.eigenvalues[0].abs() < 1e-8);
        for j in 1..=3 {
            let want = (j as f64 * PI).powi(2);
            assert!(rel(s.eigenvalues[j], want) < 1e-6, "{} vs {want}", s.eigenvalues[j]);
        }
    }

    #[test]
    fn zonal_sphere_spectra() {
        let s2 = SLProblem::interval(PI, Arc::new(f64::sin)).with_singular_ends(true, true);
        let s = refine_until(&s2, 3, 1e-8).unwrap();
        for (j, want) in [2.0, 6.0, 12.0].iter().enumerate() {
            assert!(rel(s.eigenvalues[j + 1], *want) < 1e-6, "{:?}", s.eigenvalues);
        }
        let s3 = SLProblem::interval(PI, Arc::new(|t: f64| t.sin().powi(2))).with_singular_ends(true, true);
        let s = refine_until(&s3, 3, 1e-8).unwrap();
        for (j, want) in [3.0, 8.0, 15.0].iter().enumerate() {
            assert!(rel(s.eigenvalues[j + 1], *want) < 1e-6, "{:?}", s.eigenvalues);
        }
    }

    #[test]
    fn fixed_mesh_spectrum_has_error_estimates() {
        let p = SLProblem::constant(Domain::Interval { length: 1.0 })
            .with_conditions(EndCondition::Dirichlet, EndCondition::Dirichlet);
        let s = solve_spectrum(&p, &Mesh::uniform(1.0, 200).unwrap(), 1).unwrap();
        for (j, v) in s.eigenvalues.iter().enumerate() {
            let want = ((j + 1) as f64 * PI).powi(2);
            assert!((v - want).abs() <= 1.1 * s.error_estimates[j] + 1e-9);
            assert!(rel(*v, want) < 1e-3);
        }
    }

    #[test]
    fn observed_order_is_two_for_smooth_weight() {
        let p = SLProblem::interval(1.0, Arc::new(|t: f64| 1.0 + 0.5 * t * t))
            .with_conditions(EndCondition::Neumann, EndCondition::Dirichlet);
        let s = refine_until(&p, 2, 1e-9).unwrap();
        let order = s.observed_order.unwrap();
        assert!((1.8..=2.2).contains(&order), "order {order}");
    }

    #[test]
    fn tolerance_below_floor_is_rejected() {
        let p = SLProblem::constant(Domain::Interval { length: 1.0 });
        assert!(refine_until(&p, 1, 1e-12).is_err());
    }

    #[test]
    fn json_shape() {
        let s = SpectrumResult {
            eigenvalues: vec![0.0, 1.0],
            error_estimates: vec![0.0, 1e-9],
            elements: 64,
            converged: true,
            observed_order: Some(2.0),
        };
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 4);
        for key in ["eigenvalues", "error_estimates", "elements", "converged"] {
            assert!(v.get(key).is_some());
        }
    }
}
