//! The sharp bound for O(n)-invariant eigenvalues of embedded spheres and
//! the smoothed glued-ball sequence approaching it.

use rayon::prelude::*;

use super::report::{BoundReport, BoundRow, SkippedProfile, SweepKind, SweepReport, SweepRow};
use crate::geometry::{
    build_profile, envelope_check, induced_metric, AmbientSpace, AmbientTag, FamilySpec, ProfileCurve, ProfileKind,
};
use crate::sl::{invariant_spectrum, radial_ball_spectrum, EndCondition};
use crate::{Error, Result};

/// Arclength of the generating curve in the glued-ball sequence.
pub const GLUED_LENGTH: f64 = 2.0;

/// `B_1..=B_{k_max}`: the nonzero invariant eigenvalues of two balls of
/// volume 1/2 glued along their boundary, i.e. the sorted union of the
/// radial Dirichlet and Neumann spectra of one such ball.
pub fn limit_bounds(ambient: &AmbientSpace, n: usize, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let dirichlet = radial_ball_spectrum(ambient, n, EndCondition::Dirichlet, k_max - 1, 0.5)?;
    let neumann = radial_ball_spectrum(ambient, n, EndCondition::Neumann, k_max, 0.5)?;
    let mut all: Vec<f64> = dirichlet
        .eigenvalues
        .iter()
        .chain(neumann.eigenvalues.iter().skip(1))
        .copied()
        .collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.truncate(k_max);
    Ok(all)
}

/// `B_k` in the glued-double normalization.
pub fn limit_bound(ambient: &AmbientSpace, n: usize, k: usize) -> Result<f64> {
    Ok(limit_bounds(ambient, n, k)?[k - 1])
}

/// The bound read with the extra `Vol(D)^{2/n} = (1/2)^{2/n}` factor.
pub fn literal_bound(bound: f64, n: usize) -> f64 {
    bound * 0.5_f64.powf(2.0 / n as f64)
}

/// Rows for `k = 1..=k_max` on each sphere-like profile, rescaled to unit
/// volume. Profiles that fail to build or are not admissible (not
/// sphere-like, not euclidean) are listed in `skipped`.
pub fn bound_report(profiles: &[FamilySpec], n: usize, k_max: usize, tol: f64) -> Result<BoundReport> {
    let ambient = AmbientSpace::euclidean();
    let bounds = limit_bounds(&ambient, n, k_max)?;
    let outcomes: Vec<std::result::Result<Vec<BoundRow>, SkippedProfile>> = profiles
        .par_iter()
        .map(|spec| {
            let skip = |reason: String| SkippedProfile {
                profile: spec.descriptor().to_string(),
                reason,
            };
            if spec.ambient != AmbientTag::Euclidean {
                return Err(skip(format!("ambient is {}, the bound needs euclidean", spec.ambient)));
            }
            if spec.n.is_some_and(|m| m != n) {
                return Err(skip(format!("descriptor dimension differs from n = {n}")));
            }
            let curve = build_profile(spec).map_err(|e| skip(e.to_string()))?;
            profile_rows(&curve, spec.descriptor(), n, &bounds, tol).map_err(|e| skip(e.to_string()))
        })
        .collect();
    let mut report = BoundReport {
        ambient: AmbientTag::Euclidean,
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for o in outcomes {
        match o {
            Ok(rows) => report.rows.extend(rows),
            Err(s) => report.skipped.push(s),
        }
    }
    Ok(report)
}

/// Bound rows for one curve in the euclidean ambient.
pub fn profile_rows(curve: &ProfileCurve, label: &str, n: usize, bounds: &[f64], tol: f64) -> Result<Vec<BoundRow>> {
    if curve.kind() != ProfileKind::SphereLike {
        return Err(Error::InvalidParameter("the bound applies to sphere-like profiles".into()));
    }
    let metric = induced_metric(curve, &AmbientSpace::euclidean(), n)?.unit_volume()?;
    let envelope = envelope_check(&metric)?;
    let k_max = bounds.len();
    let spectrum = invariant_spectrum(&metric, k_max, tol)?;
    Ok((1..=k_max)
        .map(|k| {
            let value = metric.normalize_eigenvalue(spectrum.eigenvalues[k]);
            let bound = bounds[k - 1];
            BoundRow {
                profile: label.to_string(),
                n,
                k,
                normalized_eigenvalue: value,
                bound,
                margin: bound - value,
                bound_literal: literal_bound(bound, n),
                envelope_pass: envelope.pass,
                envelope_max_violation: envelope.max_violation,
                converged: spectrum.converged,
            }
        })
        .collect())
}

/// `λ_k · Vol^{2/n}` along the smoothed glued balls `glued:h` for
/// decreasing `h`, with the gap to `B_k`.
pub fn extremal_sequence(ambient: &AmbientSpace, n: usize, k: usize, h_list: &[f64], tol: f64) -> Result<SweepReport> {
    if h_list.is_empty() {
        return Err(Error::InvalidParameter("the h grid is empty".into()));
    }
    if h_list.iter().any(|h| !(*h > 0.0)) || h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter("h values must be positive and strictly decreasing".into()));
    }
    let bound = limit_bound(ambient, n, k)?;
    let rows = h_list
        .par_iter()
        .map(|&h| {
            let curve = ProfileCurve::glued_smoothed(GLUED_LENGTH, h, ambient)?;
            let metric = induced_metric(&curve, ambient, n)?;
            let s = invariant_spectrum(&metric, k, tol)?;
            let lambda = s.eigenvalues[k];
            let product = metric.normalize_eigenvalue(lambda);
            Ok(SweepRow {
                parameter: h,
                lambda,
                volume: metric.volume(),
                product,
                aux: vec![bound, bound - product, literal_bound(bound, n)],
                converged: s.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport::new(SweepKind::Extremal, n, rows);
    let last = report.rows.last().unwrap();
    report.summary.insert("bound".into(), bound);
    report.summary.insert("final_gap".into(), bound - last.product);
    report.summary.insert("final_relative_gap".into(), (bound - last.product) / bound);
    let increasing = report.rows.windows(2).all(|w| w[1].product > w[0].product);
    report.summary.insert("increasing".into(), f64::from(u8::from(increasing)));
    Ok(report)
}
