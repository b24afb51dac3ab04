//! Invariant, mode-by-mode and radial spectra of metrics of revolution.

use std::sync::Arc;

use super::problem::{EndCondition, SLProblem};
use super::refine::{refine_until, SpectrumResult};
use crate::geometry::{unit_sphere_volume, AmbientSpace, ProfileKind, RevolutionMetric};
use crate::quadrature::{adaptive, bisect};
use crate::{Error, Result};

/// Tolerance used for radial ball spectra.
pub const RADIAL_TOL: f64 = 1e-10;

/// `-(J u')' = λ J u` on the profile: Natural at poles, periodic on loops.
pub fn invariant_problem(metric: &RevolutionMetric) -> SLProblem {
    let m = metric.clone();
    let weight = Arc::new(move |t: f64| m.weight(t));
    let problem = match metric.kind() {
        ProfileKind::SphereLike => SLProblem::interval(metric.length(), weight).with_singular_ends(true, true),
        ProfileKind::ClosedLoop => SLProblem::circle(metric.length(), weight),
    };
    problem.with_breakpoints(metric.breakpoints().to_vec())
}

/// Eigenvalues `λ_0..=λ_k` of the Laplacian on invariant functions.
pub fn invariant_spectrum(metric: &RevolutionMetric, k: usize, tol: f64) -> Result<SpectrumResult> {
    refine_until(&invariant_problem(metric), k, tol)
}

/// Problem for eigenfunctions of the form `u(t) Y(θ)` with `Y` a spherical
/// harmonic of degree `ℓ` on `S^{n-1}`: the potential is
/// `ℓ(ℓ+n-2) J / F² = ω ℓ(ℓ+n-2) F^{n-3}`.
pub fn mode_problem(metric: &RevolutionMetric, l: usize) -> SLProblem {
    let base = invariant_problem(metric);
    if l == 0 {
        return base;
    }
    let n = metric.n();
    let c = metric.omega() * (l * (l + n - 2)) as f64;
    let m = metric.clone();
    let q = Arc::new(move |t: f64| c * m.radius(t).powi(n as i32 - 3));
    let base = base.with_potential(q);
    match metric.kind() {
        ProfileKind::SphereLike => base.with_conditions(EndCondition::Dirichlet, EndCondition::Dirichlet),
        ProfileKind::ClosedLoop => base,
    }
}

/// Eigenvalues `λ_0..=λ_k` of the degree-`ℓ` mode equation.
pub fn mode_spectrum(metric: &RevolutionMetric, l: usize, k: usize, tol: f64) -> Result<SpectrumResult> {
    if l == 0 {
        return invariant_spectrum(metric, k, tol);
    }
    refine_until(&mode_problem(metric, l), k, tol)
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Dimension of the space of degree-`ℓ` spherical harmonics on `S^{n-1}`.
pub fn harmonic_multiplicity(n: usize, l: usize) -> u64 {
    let m = n - 1;
    if m == 1 {
        return if l == 0 { 1 } else { 2 };
    }
    let lower = if l >= 2 { binomial(l - 2 + m, m) } else { 0 };
    binomial(l + m, m) - lower
}

/// Volume `ω_{n-1} ∫_0^r F^{n-1}` of the geodesic ball of radius `r`.
pub fn ball_volume(ambient: &AmbientSpace, n: usize, r: f64) -> Result<f64> {
    let omega = unit_sphere_volume(n - 1);
    let int = adaptive(|s| ambient.f(s).powi(n as i32 - 1), 0.0, r, 1e-15 * r.powi(n as i32).max(1e-300))?;
    Ok(omega * int.value)
}

/// Radius of the ball with the given volume.
pub fn ball_radius(ambient: &AmbientSpace, n: usize, volume: f64) -> Result<f64> {
    if !(volume > 0.0) || !volume.is_finite() {
        return Err(Error::InvalidParameter(format!("ball volume {volume} must be positive")));
    }
    let r_max = ambient.r_max();
    let mut hi = 1.0_f64.min(0.5 * r_max);
    let mut guard = 0;
    while ball_volume(ambient, n, hi)? < volume {
        hi = if r_max.is_finite() { 0.5 * (hi + r_max) } else { 2.0 * hi };
        guard += 1;
        if guard > 200 {
            return Err(Error::RootFinding(format!("no ball of volume {volume} fits in the ambient space")));
        }
    }
    bisect(
        |r| ball_volume(ambient, n, r).unwrap_or(f64::NAN) - volume,
        0.0,
        hi,
        1e-15 * hi,
    )
}

/// Radial eigenvalues `λ_0..=λ_k` of the ball of the given volume, with
/// `bc` on the boundary sphere.
pub fn radial_ball_spectrum(
    ambient: &AmbientSpace,
    n: usize,
    bc: EndCondition,
    k: usize,
    volume: f64,
) -> Result<SpectrumResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension n = {n} must be at least 2")));
    }
    if bc == EndCondition::Natural {
        return Err(Error::BoundaryCondition("the ball boundary needs Dirichlet or Neumann".into()));
    }
    let r_max = ball_radius(ambient, n, volume)?;
    let omega = unit_sphere_volume(n - 1);
    let f = ambient.clone();
    let weight = Arc::new(move |r: f64| omega * f.f(r).powi(n as i32 - 1));
    let problem = SLProblem::interval(r_max, weight)
        .with_conditions(EndCondition::Natural, bc)
        .with_singular_ends(true, false);
    refine_until(&problem, k, RADIAL_TOL)
}
