//! Exit-gate checks. Each test prints one `[acceptance] <name>: PASS|FAIL`
//! line to the real stdout and then asserts.

mod common;

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use common::{bessel_zero, lattice_below, rel, verdict};
use revlab_core::geometry::{envelope_check, induced_metric, AmbientSpace, FamilySpec, ProfileCurve, RevolutionMetric};
use revlab_core::lab::{
    bound_report, concentration_experiment, ellipse_sweep, extremal_sequence, extremality_probe, final_decade_fit,
    limit_bound, m_escalation, m_index_auto, torus_sweep, ConcentrationConfig, EscalationFamily, ProbeFamily,
    DEFAULT_ELLIPSE_EPS, DEFAULT_STEP, DEFAULT_TORUS_RADII,
};
use revlab_core::sl::{
    discrete_eigenvalues, invariant_spectrum, radial_ball_spectrum, refine_until, Domain, EndCondition,
    Mesh, SLProblem, DEFAULT_TOL,
};

fn euclid() -> AmbientSpace {
    AmbientSpace::euclidean()
}

fn wavy_specs(count: u64) -> Vec<FamilySpec> {
    (0..count).map(|s| format!("wavy:seed={s}").parse().unwrap()).collect()
}

fn unit_metric(curve: &ProfileCurve, n: usize) -> RevolutionMetric {
    induced_metric(curve, &euclid(), n).unwrap().unit_volume().unwrap()
}

#[test]
fn c1_oracle_suite() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;

    // constant weight on [0, 1] and the circle of length 2π
    let seg = Domain::Interval { length: 1.0 };
    for (left, right, first) in [
        (EndCondition::Neumann, EndCondition::Neumann, 0),
        (EndCondition::Dirichlet, EndCondition::Dirichlet, 1),
    ] {
        let s = refine_until(&SLProblem::constant(seg).with_conditions(left, right), 5, DEFAULT_TOL).unwrap();
        for (i, &lam) in s.eigenvalues.iter().enumerate() {
            let k = (i + first) as f64;
            if k == 0.0 {
                worst = worst.max(lam.abs());
            } else {
                worst = worst.max(rel(lam, k * k * PI * PI));
            }
        }
    }
    let circle = SLProblem::constant(Domain::Circle { circumference: 2.0 * PI });
    let s = refine_until(&circle, 4, DEFAULT_TOL).unwrap();
    for (lam, want) in s.eigenvalues.iter().zip([0.0, 1.0, 1.0, 4.0, 4.0]) {
        worst = worst.max(if want == 0.0 { lam.abs() } else { rel(*lam, want) });
    }
    let const_ok = worst <= 1e-6;

    // round spheres of radius one
    let mut sphere_err: f64 = 0.0;
    for n in [2usize, 3] {
        let m = induced_metric(&ProfileCurve::round_sphere(), &euclid(), n).unwrap();
        let s = invariant_spectrum(&m, 5, DEFAULT_TOL).unwrap();
        for l in 1..=5usize {
            let want = (l * (l + n - 1)) as f64;
            sphere_err = sphere_err.max(rel(s.eigenvalues[l], want));
        }
    }
    let sphere_ok = sphere_err <= 1e-4;

    // unit disk, radial modes
    let mut disk_err: f64 = 0.0;
    let d = radial_ball_spectrum(&euclid(), 2, EndCondition::Dirichlet, 4, PI).unwrap();
    for (i, lam) in d.eigenvalues.iter().enumerate() {
        disk_err = disk_err.max(rel(*lam, bessel_zero(0, i + 1).powi(2)));
    }
    let nm = radial_ball_spectrum(&euclid(), 2, EndCondition::Neumann, 5, PI).unwrap();
    for (i, lam) in nm.eigenvalues.iter().enumerate().skip(1) {
        disk_err = disk_err.max(rel(*lam, bessel_zero(1, i).powi(2)));
    }
    let disk_ok = disk_err <= 1e-6;

    let secs = start.elapsed().as_secs_f64();
    let pass = const_ok && sphere_ok && disk_ok && secs < 30.0;
    verdict(
        "1 oracle suite",
        pass,
        &format!("const {worst:.2e} <= 1e-6, spheres {sphere_err:.2e} <= 1e-4, disk {disk_err:.2e} <= 1e-6, {secs:.1}s < 30s"),
    );
    assert!(pass);
}

#[test]
fn c2_sharp_bound_on_random_profiles() {
    let start = Instant::now();
    let tol = DEFAULT_TOL;
    let report = bound_report(&wavy_specs(24), 2, 5, tol).unwrap();
    let profiles: std::collections::BTreeSet<_> = report.rows.iter().map(|r| r.profile.clone()).collect();
    let mut min_excess = f64::INFINITY;
    let mut all_converged = true;
    for row in &report.rows {
        min_excess = min_excess.min(row.margin / (10.0 * tol * row.bound));
        all_converged &= row.converged;
    }
    let b1 = limit_bound(&euclid(), 2, 1).unwrap();
    let b1_oracle = 2.0 * PI * bessel_zero(0, 1).powi(2);
    let secs = start.elapsed().as_secs_f64();
    let pass = profiles.len() >= 20
        && report.skipped.is_empty()
        && report.rows.len() == 5 * profiles.len()
        && min_excess > 1.0
        && all_converged
        && (b1 - 36.3367).abs() <= 1e-3
        && rel(b1, b1_oracle) <= 1e-8
        && secs < 120.0;
    verdict(
        "2 sharp bound",
        pass,
        &format!(
            "{} profiles x k=1..5, min margin / (10 tol B_k) = {min_excess:.3e}, B_1 = {b1:.6} (oracle {b1_oracle:.6}), {secs:.1}s < 120s",
            profiles.len()
        ),
    );
    assert!(pass);
}

#[test]
fn c3_extremal_sequence() {
    let rep = extremal_sequence(&euclid(), 2, 1, &[1e-1, 1e-2, 1e-3], DEFAULT_TOL).unwrap();
    let b1 = limit_bound(&euclid(), 2, 1).unwrap();
    let p = rep.products();
    let increasing = p.windows(2).all(|w| w[1] > w[0]);
    let below = p.iter().all(|&x| x < b1);
    let close = (b1 - p[2]) / b1 <= 0.01;
    let pass = increasing && below && close;
    verdict(
        "3 extremal sequence",
        pass,
        &format!("products {:.6} {:.6} {:.6}, bound {b1:.6}", p[0], p[1], p[2]),
    );
    assert!(pass);
}

#[test]
fn c4_concentration() {
    let rep = concentration_experiment(&ConcentrationConfig::default()).unwrap();
    let (slope, growth) = final_decade_fit(&rep).unwrap();
    let pass = growth >= 10.0 && (-4.8..=-3.2).contains(&slope);
    verdict(
        "4 concentration",
        pass,
        &format!("final decade growth {growth:.3e} >= 10, slope {slope:.4} in [-4.8, -3.2]"),
    );
    assert!(pass);
}

#[test]
fn c5a_torus_product_increasing() {
    let rep = torus_sweep(&DEFAULT_TORUS_RADII, DEFAULT_TOL).unwrap();
    let p = rep.products();
    let pass = p.windows(2).all(|w| w[1] > w[0]);
    verdict("5a torus product increasing", pass, &format!("products {p:.6?}"));
    assert!(pass);
}

#[test]
fn c5b_torus_large_radius_limit() {
    let rep = torus_sweep(&[1000.0], DEFAULT_TOL).unwrap();
    let lam = rep.rows[0].lambda;
    let pass = (lam - 1.0).abs() <= 1e-3;
    verdict("5b torus lambda_1 at R = 1000", pass, &format!("{lam:.9} = 1 +- 1e-3"));
    assert!(pass);
}

#[test]
fn c5c_torus_volume() {
    let rep = torus_sweep(&DEFAULT_TORUS_RADII, DEFAULT_TOL).unwrap();
    let worst = rep
        .rows
        .iter()
        .map(|r| rel(r.volume, 4.0 * PI * PI * r.parameter))
        .fold(0.0, f64::max);
    let pass = worst <= 1e-8;
    verdict("5c torus volume", pass, &format!("max relative error {worst:.2e} <= 1e-8"));
    assert!(pass);
}

#[test]
fn c5d_torus_quasi_isometry_ratios() {
    let radii = [3.0, 5.0, 10.0, 100.0, 1000.0];
    let rep = torus_sweep(&radii, DEFAULT_TOL).unwrap();
    let lo = rep.column("ratio_min").unwrap();
    let hi = rep.column("ratio_max").unwrap();
    let bad: Vec<String> = radii
        .iter()
        .zip(lo.iter().zip(&hi))
        .filter(|(_, (a, b))| !(**a >= 0.5 && **b <= 1.5))
        .map(|(r, (a, b))| format!("R={r}: [{a:.4}, {b:.4}]"))
        .collect();
    let pass = bad.is_empty();
    verdict(
        "5d torus quasi-isometry ratios R^2/(R+-1)^2 in [1/2, 3/2] for R >= 3",
        pass,
        &if pass { "all radii".to_string() } else { format!("outside: {}", bad.join("; ")) },
    );
    assert!(pass, "ratio extremes outside [1/2, 3/2]: {bad:?}");
}

#[test]
fn c6_ellipse_product_collapses() {
    let rep = ellipse_sweep(&DEFAULT_ELLIPSE_EPS, DEFAULT_TOL).unwrap();
    let p = rep.products();
    let drop = p[0] / p[p.len() - 1];
    let pass = drop >= 10.0;
    verdict("6 ellipse product drop", pass, &format!("{:.4} -> {:.4}, factor {drop:.2} >= 10", p[0], p[p.len() - 1]));
    assert!(pass);
}

#[test]
fn c7_extremality_probe() {
    let sph = extremality_probe(ProbeFamily::Spheroid, 1, DEFAULT_STEP).unwrap();
    let iso = extremality_probe(ProbeFamily::Isometric, 1, DEFAULT_STEP).unwrap();
    let equal = (sph.left.value - sph.right.value).abs() <= sph.left.error + sph.right.error;
    let pass = sph.non_extremal_witness
        && sph.left.exceeds_error()
        && sph.right.exceeds_error()
        && equal
        && iso.zero_within_error;
    verdict(
        "7 extremality probe",
        pass,
        &format!(
            "spheroid D- = {:.5} +- {:.1e}, D+ = {:.5} +- {:.1e}; isometric D- = {:.1e} +- {:.1e}, D+ = {:.1e} +- {:.1e}",
            sph.left.value,
            sph.left.error,
            sph.right.value,
            sph.right.error,
            iso.left.value,
            iso.left.error,
            iso.right.value,
            iso.right.error
        ),
    );
    assert!(pass);
}

#[test]
fn c8_m_index() {
    let mut lines = Vec::new();
    let mut exact = true;
    for r in [2.0, 3.0, 5.0, 10.0] {
        let metric = RevolutionMetric::flat_product(2, r).unwrap();
        let got = m_index_auto(&metric, 1).unwrap();
        // λ_1 invariant is 1; with λ_0 = 0 first, its index is the number
        // of lattice eigenvalues strictly below it
        let want = lattice_below(r, 1.0);
        exact &= got.m == want;
        lines.push(format!("R={r}: {} vs {want}", got.m));
    }
    let esc = m_escalation(EscalationFamily::Product, &[2.0, 5.0, 10.0], 10).unwrap();
    let m_max = esc.column("m_index").unwrap().into_iter().fold(0.0, f64::max);
    let pass = exact && m_max > 10.0;
    verdict("8 m-index", pass, &format!("{}; escalation max m = {m_max}", lines.join(", ")));
    assert!(pass);
}

#[test]
fn c9_properties() {
    // scale invariance of λ_k Vol^{2/n}
    let mut scale_err: f64 = 0.0;
    for n in [2usize, 3] {
        let base = induced_metric(&ProfileCurve::round_sphere(), &euclid(), n).unwrap();
        let b = invariant_spectrum(&base, 3, DEFAULT_TOL).unwrap();
        for c in [0.5, 2.0] {
            let m = base.scaled(c).unwrap();
            let s = invariant_spectrum(&m, 3, DEFAULT_TOL).unwrap();
            for k in 1..=3 {
                scale_err = scale_err.max(rel(m.normalize_eigenvalue(s.eigenvalues[k]), base.normalize_eigenvalue(b.eigenvalues[k])));
            }
        }
    }
    let scale_ok = scale_err <= 1e-8;

    // Dirichlet above Neumann on one assembly
    let weight: revlab_core::geometry::ScalarFn = Arc::new(|t: f64| 1.0 + 0.5 * (3.0 * t).sin());
    let mesh = Mesh::uniform(2.0, 200).unwrap();
    let dir = SLProblem::interval(2.0, weight.clone()).with_conditions(EndCondition::Dirichlet, EndCondition::Dirichlet);
    let neu = SLProblem::interval(2.0, weight).with_conditions(EndCondition::Neumann, EndCondition::Neumann);
    let d = discrete_eigenvalues(&dir, &mesh, 8).unwrap();
    let nv = discrete_eigenvalues(&neu, &mesh, 8).unwrap();
    let order_ok = d.iter().zip(&nv).all(|(a, b)| a >= b);

    // envelope: strict on admissible profiles, tight only for the glued limit
    let mut curves: Vec<(String, ProfileCurve)> = vec![
        ("round".into(), ProfileCurve::round_sphere()),
        ("spheroid".into(), ProfileCurve::spheroid(0.5, 2.0).unwrap()),
        ("glued h=0.1".into(), ProfileCurve::glued_smoothed(2.0, 0.1, &euclid()).unwrap()),
    ];
    for spec in wavy_specs(20) {
        curves.push((spec.descriptor().to_string(), revlab_core::geometry::build_profile(&spec).unwrap()));
    }
    let mut min_slack = f64::INFINITY;
    let mut max_violation = f64::NEG_INFINITY;
    let mut all_pass = true;
    for (_, c) in &curves {
        let e = envelope_check(&unit_metric(c, 2)).unwrap();
        all_pass &= e.pass;
        min_slack = min_slack.min(e.max_slack);
        max_violation = max_violation.max(e.max_violation);
    }
    let glued = envelope_check(&unit_metric(&ProfileCurve::glued_limit(2.0).unwrap(), 2)).unwrap();
    let envelope_ok = all_pass && glued.pass && min_slack > 1e-6 && glued.max_slack <= 1e-6;

    let pass = scale_ok && order_ok && envelope_ok;
    verdict(
        "9 properties",
        pass,
        &format!(
            "scale {scale_err:.2e} <= 1e-8, dirichlet >= neumann {order_ok}, envelope on {} profiles max violation {max_violation:.2e} min slack {min_slack:.2e}, glued limit slack {:.2e}",
            curves.len(),
            glued.max_slack
        ),
    );
    assert!(pass);
}
