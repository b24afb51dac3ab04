//! Sweeps over tori of revolution and thin ellipses in `R^3`.

use rayon::prelude::*;

use super::report::{SweepKind, SweepReport, SweepRow};
use crate::geometry::{induced_metric, AmbientSpace, ProfileCurve};
use crate::sl::invariant_spectrum;
use crate::{Error, Result};

pub const DEFAULT_TORUS_RADII: [f64; 5] = [2.0, 5.0, 10.0, 100.0, 1000.0];
pub const DEFAULT_ELLIPSE_EPS: [f64; 4] = [0.2, 0.1, 0.05, 0.02];
/// Ellipse centre as a multiple of the short semi-axis.
pub const ELLIPSE_CENTER_RATIO: f64 = 2.0;

/// `λ_1^{S^1}`, area and their product for the tori `T_R` (generating unit
/// circle centred at distance `R` from the axis). Auxiliary columns are the
/// quasi-isometry ratio extremes `R²/(R+1)²`, `R²/(R-1)²` and the length
/// ratios `R/(R±1)`.
pub fn torus_sweep(radii: &[f64], tol: f64) -> Result<SweepReport> {
    check_monotone(radii, true, "R")?;
    let euclid = AmbientSpace::euclidean();
    let rows = radii
        .par_iter()
        .map(|&r| {
            let metric = induced_metric(&ProfileCurve::torus(r)?, &euclid, 2)?;
            let s = invariant_spectrum(&metric, 1, tol)?;
            let lambda = s.eigenvalues[1];
            Ok(SweepRow {
                parameter: r,
                lambda,
                volume: metric.volume(),
                product: lambda * metric.volume(),
                aux: vec![
                    (r / (r + 1.0)).powi(2),
                    (r / (r - 1.0)).powi(2),
                    r / (r + 1.0),
                    r / (r - 1.0),
                ],
                converged: s.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::new(SweepKind::Torus, 2, rows))
}

/// Thin ellipses with semi-axes `ε` (radial) and `1/ε` (axial), centred at
/// `2ε` from the axis.
pub fn ellipse_sweep(eps_list: &[f64], tol: f64) -> Result<SweepReport> {
    ellipse_sweep_with_center(eps_list, ELLIPSE_CENTER_RATIO, tol)
}

/// As [`ellipse_sweep`] with the centre at `center_ratio · ε`; ratios at or
/// below 1 make the curve meet the axis and are rejected.
pub fn ellipse_sweep_with_center(eps_list: &[f64], center_ratio: f64, tol: f64) -> Result<SweepReport> {
    check_monotone(eps_list, false, "eps")?;
    let euclid = AmbientSpace::euclidean();
    let rows = eps_list
        .par_iter()
        .map(|&eps| {
            if !(eps > 0.0) {
                return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
            }
            let curve = ProfileCurve::ellipse_loop(eps, 1.0 / eps, center_ratio * eps)?;
            let metric = induced_metric(&curve, &euclid, 2)?;
            let s = invariant_spectrum(&metric, 1, tol)?;
            let lambda = s.eigenvalues[1];
            Ok(SweepRow {
                parameter: eps,
                lambda,
                volume: metric.volume(),
                product: lambda * metric.volume(),
                aux: vec![metric.length()],
                converged: s.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport::new(SweepKind::Ellipse, 2, rows);
    let p = report.products();
    report.summary.insert("product_ratio_last_to_first".into(), p[p.len() - 1] / p[0]);
    Ok(report)
}

fn check_monotone(values: &[f64], increasing: bool, name: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidParameter(format!("the {name} grid is empty")));
    }
    let ok = values
        .windows(2)
        .all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] });
    if !ok {
        let dir = if increasing { "increasing" } else { "decreasing" };
        return Err(Error::InvalidParameter(format!("{name} values must be strictly {dir}")));
    }
    Ok(())
}
