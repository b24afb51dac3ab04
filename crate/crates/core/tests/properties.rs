mod common;

use std::sync::Arc;

use proptest::prelude::*;
use revlab_core::geometry::{
    build_profile, induced_metric, reparametrize_unit_measure, AmbientSpace, FamilySpec, ScalarFn,
};
use revlab_core::lab::{SweepKind, SweepReport, SweepRow};
use revlab_core::sl::{
    assemble, discrete_eigenvalues, harmonic_multiplicity, invariant_spectrum, smallest_eigenvalues, sturm_count,
    Domain, EndCondition, Mesh, SLProblem,
};

fn wave(a: f64, b: f64, f: f64) -> ScalarFn {
    Arc::new(move |t: f64| 1.0 + a * (f * t).sin() + b * (2.0 * f * t).cos())
}

fn coeffs() -> impl Strategy<Value = (f64, f64, f64)> {
    (-0.4f64..0.4, -0.4f64..0.4, 0.5f64..6.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dirichlet_dominates_neumann((a, b, f) in coeffs(), elements in 8usize..120) {
        let mesh = Mesh::uniform(1.5, elements).unwrap();
        let base = SLProblem::interval(1.5, wave(a, b, f));
        let d = base.clone().with_conditions(EndCondition::Dirichlet, EndCondition::Dirichlet);
        let n = base.with_conditions(EndCondition::Neumann, EndCondition::Neumann);
        let ld = discrete_eigenvalues(&d, &mesh, 5).unwrap();
        let ln = discrete_eigenvalues(&n, &mesh, 5).unwrap();
        for (x, y) in ld.iter().zip(&ln) {
            prop_assert!(x >= y);
        }
    }

    #[test]
    fn nonnegative_potential_raises_eigenvalues((a, b, f) in coeffs(), c in 0.0f64..5.0) {
        let mesh = Mesh::uniform(1.0, 64).unwrap();
        let plain = SLProblem::interval(1.0, wave(a, b, f));
        let shifted = plain.clone().with_potential(Arc::new(move |t: f64| c * (1.0 + t * t)));
        let l0 = discrete_eigenvalues(&plain, &mesh, 5).unwrap();
        let l1 = discrete_eigenvalues(&shifted, &mesh, 5).unwrap();
        for (x, y) in l0.iter().zip(&l1) {
            prop_assert!(*y >= *x - 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn nested_refinement_lowers_eigenvalues((a, b, f) in coeffs(), periodic in any::<bool>()) {
        let p = if periodic {
            SLProblem::circle(2.0, wave(a, b, f))
        } else {
            SLProblem::interval(2.0, wave(a, b, f))
        };
        let coarse = Mesh::uniform(2.0, 24).unwrap();
        let fine = coarse.refined();
        let lc = discrete_eigenvalues(&p, &coarse, 6).unwrap();
        let lf = discrete_eigenvalues(&p, &fine, 6).unwrap();
        for (c, f) in lc.iter().zip(&lf) {
            prop_assert!(*f <= *c + 1e-10 * c.abs().max(1.0));
        }
    }

    #[test]
    fn sturm_count_brackets_eigenvalues((a, b, f) in coeffs(), periodic in any::<bool>()) {
        let p = if periodic {
            SLProblem::circle(1.0, wave(a, b, f))
        } else {
            SLProblem::interval(1.0, wave(a, b, f)).with_conditions(EndCondition::Dirichlet, EndCondition::Neumann)
        };
        let pencil = assemble(&p, &Mesh::uniform(1.0, 40).unwrap()).unwrap();
        let lam = smallest_eigenvalues(&pencil, 6).unwrap();
        for w in lam.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        for (i, &l) in lam.iter().enumerate() {
            if i + 1 < lam.len() && lam[i + 1] - l < 1e-8 * l.max(1.0) {
                continue;
            }
            let eps = 1e-7 * l.max(1.0);
            prop_assert!(sturm_count(&pencil, l + eps) >= i + 1);
            prop_assert!(sturm_count(&pencil, l - eps) <= i);
        }
    }

    #[test]
    fn natural_and_periodic_spectra_start_at_zero((a, b, f) in coeffs(), periodic in any::<bool>()) {
        let p = if periodic {
            SLProblem::circle(3.0, wave(a, b, f))
        } else {
            SLProblem::interval(3.0, wave(a, b, f))
        };
        let l = discrete_eigenvalues(&p, &Mesh::uniform(3.0, 50).unwrap(), 3).unwrap();
        prop_assert!(l[0].abs() < 1e-9);
        prop_assert!(l[1] > 1e-3);
    }

    #[test]
    fn normalized_spectrum_is_scale_invariant(seed in 0u64..1000, c in 0.2f64..5.0) {
        let spec: FamilySpec = format!("wavy:seed={seed}").parse().unwrap();
        let curve = build_profile(&spec).unwrap();
        let m = induced_metric(&curve, &AmbientSpace::euclidean(), 2).unwrap();
        let s = m.scaled(c).unwrap();
        let a = invariant_spectrum(&m, 2, 1e-6).unwrap();
        let b = invariant_spectrum(&s, 2, 1e-6).unwrap();
        for k in 1..=2 {
            let x = m.normalize_eigenvalue(a.eigenvalues[k]);
            let y = s.normalize_eigenvalue(b.eigenvalues[k]);
            prop_assert!(common::rel(y, x) < 1e-8);
        }
    }

    #[test]
    fn unit_measure_parametrization_is_increasing(seed in 0u64..1000) {
        let spec: FamilySpec = format!("wavy:seed={seed}").parse().unwrap();
        let curve = build_profile(&spec).unwrap();
        let m = induced_metric(&curve, &AmbientSpace::euclidean(), 2).unwrap().unit_volume().unwrap();
        let p = reparametrize_unit_measure(&m).unwrap();
        let a: Vec<f64> = (0..=40).map(|i| p.alpha(i as f64 / 40.0)).collect();
        prop_assert!(a[0].abs() < 1e-12);
        prop_assert!((a[40] - m.length()).abs() < 1e-9 * m.length());
        for w in a.windows(2) {
            prop_assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn sweep_csv_round_trip(rows in prop::collection::vec((0.01f64..100.0, 0.0f64..1e4, 0.1f64..1e3), 1..8)) {
        let rows: Vec<SweepRow> = rows
            .into_iter()
            .map(|(p, l, v)| SweepRow { parameter: p, lambda: l, volume: v, product: l * v, aux: vec![p / 2.0], converged: true })
            .collect();
        let report = SweepReport::new(SweepKind::Ellipse, 2, rows.clone());
        let back = SweepReport::rows_from_csv(SweepKind::Ellipse, &report.to_csv().unwrap()).unwrap();
        prop_assert_eq!(back.len(), rows.len());
        for (x, y) in back.iter().zip(&rows) {
            for (u, v) in [(x.parameter, y.parameter), (x.lambda, y.lambda), (x.product, y.product), (x.aux[0], y.aux[0])] {
                prop_assert!((u - v).abs() <= 1e-11 * v.abs());
            }
        }
    }
}

#[test]
fn harmonic_multiplicities_sum_to_polynomial_dimension() {
    // harmonic polynomials of degree ≤ L in n variables: C(L+n, n) - C(L-2+n, n)
    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for n in 2..=5usize {
        let d = n as u64;
        for l in 0..=8u64 {
            let total: u64 = (0..=l).map(|j| harmonic_multiplicity(n, j as usize)).sum();
            let want = binom(l + d, d) - if l >= 2 { binom(l - 2 + d, d) } else { 0 };
            assert_eq!(total, want, "n={n} L={l}");
        }
    }
}

#[test]
fn periodic_constant_weight_matches_discrete_fourier() {
    let p = SLProblem::constant(Domain::Circle { circumference: 1.0 });
    let uniform = Mesh::uniform(1.0, 30).unwrap();
    let a = discrete_eigenvalues(&p, &uniform, 6).unwrap();
    for (j, x) in a.iter().enumerate().skip(1) {
        let k = j.div_ceil(2) as f64;
        let h = 1.0 / 30.0;
        let th = 2.0 * std::f64::consts::PI * k * h;
        let want = 6.0 / (h * h) * (1.0 - th.cos()) / (2.0 + th.cos());
        assert!(common::rel(*x, want) < 1e-11);
    }
}
