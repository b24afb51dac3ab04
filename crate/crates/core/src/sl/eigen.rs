//! Smallest eigenvalues of a tridiagonal (or cyclic tridiagonal) pencil by
//! bisection on Sturm counts.
//!
//! With `M` positive definite, Sylvester's law of inertia says the number of
//! negative pivots in an `LDLᵀ` factorization of `K - σM` equals the number
//! of generalized eigenvalues below `σ`. The cyclic case borders the
//! tridiagonal leading block with the last two unknowns and adds the inertia
//! of the 2×2 Schur complement, whose border solves use partial pivoting.

use super::assemble::Pencil;
use crate::{Error, Result};

const PIVOT_GUARD: f64 = 1e-300;
const MAX_BISECTIONS: usize = 256;
const MAX_EXPANSIONS: usize = 2048;

/// Number of eigenvalues of `(K, M)` strictly below `sigma`.
pub fn sturm_count(p: &Pencil, sigma: f64) -> usize {
    let n = p.size();
    if !p.periodic || n < 3 {
        return ldl_count(p, sigma, n);
    }
    // Border with the last two unknowns a = n-2, b = n-1. A double
    // eigenvalue of the cycle is an eigenvalue of every path obtained by
    // deleting one node, but not of the path left after deleting two
    // adjacent ones.
    let m = n - 2;
    let count = ldl_count(p, sigma, m);
    let diag: Vec<f64> = (0..m).map(|i| p.k_diag[i] - sigma * p.m_diag[i]).collect();
    let off: Vec<f64> = (0..m.saturating_sub(1)).map(|i| p.k_off[i] - sigma * p.m_off[i]).collect();
    let mut ua = vec![0.0; m];
    let mut ub = vec![0.0; m];
    ua[m - 1] = p.k_off[m - 1] - sigma * p.m_off[m - 1];
    ub[0] = p.k_corner - sigma * p.m_corner;
    let [xa, xb] = pivoted_solve(&diag, &off, [ua.clone(), ub.clone()]);
    let dot = |u: &[f64], x: &[f64]| u.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    let saa = p.k_diag[m] - sigma * p.m_diag[m] - dot(&ua, &xa);
    let sbb = p.k_diag[m + 1] - sigma * p.m_diag[m + 1] - dot(&ub, &xb);
    let sab = p.k_off[m] - sigma * p.m_off[m] - dot(&ua, &xb);
    let det = saa * sbb - sab * sab;
    let trace = saa + sbb;
    let negative = if det < 0.0 {
        1
    } else if det > 0.0 {
        if trace < 0.0 {
            2
        } else {
            0
        }
    } else {
        usize::from(trace < 0.0)
    };
    count + negative
}

/// Solves a symmetric tridiagonal system for two right-hand sides by
/// Gaussian elimination with partial pivoting.
fn pivoted_solve(diag: &[f64], off: &[f64], mut b: [Vec<f64>; 2]) -> [Vec<f64>; 2] {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut du = off.to_vec();
    let dl = off.to_vec();
    let mut du2 = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            for r in b.iter_mut() {
                r[i + 1] -= fact * r[i];
            }
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = temp;
            for r in b.iter_mut() {
                let t = r[i];
                r[i] = r[i + 1];
                r[i + 1] = t - fact * r[i + 1];
            }
        }
    }
    for x in d.iter_mut() {
        if x.abs() < PIVOT_GUARD {
            *x = PIVOT_GUARD;
        }
    }
    for r in b.iter_mut() {
        for i in (0..n).rev() {
            let mut v = r[i];
            if i + 1 < n {
                v -= du[i] * r[i + 1];
            }
            if i + 2 < n {
                v -= du2[i] * r[i + 2];
            }
            r[i] = v / d[i];
        }
    }
    b
}

/// Negative pivots of `LDLᵀ` for the leading `m × m` block of `K − σM`.
fn ldl_count(p: &Pencil, sigma: f64, m: usize) -> usize {
    let mut count = 0;
    let mut d = 0.0;
    for i in 0..m {
        let mut next = p.k_diag[i] - sigma * p.m_diag[i];
        if i > 0 {
            let b = p.k_off[i - 1] - sigma * p.m_off[i - 1];
            next -= b * b / d;
        }
        d = next;
        if d.abs() < PIVOT_GUARD {
            d = -PIVOT_GUARD;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `count` smallest eigenvalues of the pencil, ascending.
pub fn smallest_eigenvalues(p: &Pencil, count: usize) -> Result<Vec<f64>> {
    let n = p.size();
    if count > n {
        return Err(Error::InvalidParameter(format!(
            "requested {count} eigenvalues from a system of size {n}"
        )));
    }
    let tk: f64 = p.k_diag.iter().map(|x| x.abs()).sum();
    let tm: f64 = p.m_diag.iter().sum();
    let scale = if tk > 0.0 && tm > 0.0 { tk / tm } else { 1.0 };
    let floor = scale * 1e-24;

    let mut lo0 = -1e-8 * scale;
    let mut guard = 0;
    while sturm_count(p, lo0) > 0 {
        lo0 *= 2.0;
        guard += 1;
        if guard > MAX_EXPANSIONS {
            return Err(Error::EigenNonConvergence {
                index: 0,
                iterations: guard,
            });
        }
    }
    let mut hi = scale;
    let mut out = Vec::with_capacity(count);
    let mut lo_next = lo0;
    for idx in 0..count {
        let mut expansions = 0;
        while sturm_count(p, hi) <= idx {
            hi *= 2.0;
            expansions += 1;
            if expansions > MAX_EXPANSIONS || !hi.is_finite() {
                return Err(Error::EigenNonConvergence {
                    index: idx,
                    iterations: expansions,
                });
            }
        }
        let (mut a, mut b) = (lo_next, hi);
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (a + b);
            if b - a <= 2.0 * f64::EPSILON * a.abs().max(b.abs()) + floor || mid <= a || mid >= b {
                break;
            }
            if sturm_count(p, mid) > idx {
                b = mid;
            } else {
                a = mid;
            }
        }
        lo_next = a;
        out.push((0.5 * (a + b)).max(0.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl::{assemble, Domain, EndCondition, Mesh, SLProblem};
    use std::f64::consts::PI;

    /// Dense symmetric-definite reference: Cholesky of M, then Jacobi on L⁻¹ K L⁻ᵀ.
    fn dense_reference(k: &[Vec<f64>], m: &[Vec<f64>]) -> Vec<f64> {
        let n = k.len();
        let mut l = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = m[i][j] - (0..j).map(|p| l[i][p] * l[j][p]).sum::<f64>();
                l[i][j] = if i == j { s.sqrt() } else { s / l[j][j] };
            }
        }
        let solve_lower = |b: &[f64]| {
            let mut x = vec![0.0; n];
            for i in 0..n {
                x[i] = (b[i] - (0..i).map(|p| l[i][p] * x[p]).sum::<f64>()) / l[i][i];
            }
            x
        };
        // C = L⁻¹ K L⁻ᵀ
        let mut y = vec![vec![0.0; n]; n];
        for j in 0..n {
            let col: Vec<f64> = (0..n).map(|i| k[i][j]).collect();
            let x = solve_lower(&col);
            for i in 0..n {
                y[i][j] = x[i];
            }
        }
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            let x = solve_lower(&y[i]);
            for j in 0..n {
                c[i][j] = x[j];
            }
        }
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += c[p][q] * c[p][q];
                    if c[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (c[q][q] - c[p][p]) / (2.0 * c[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let cs = 1.0 / (t * t + 1.0).sqrt();
                    let sn = t * cs;
                    for r in 0..n {
                        let (a, b) = (c[r][p], c[r][q]);
                        c[r][p] = cs * a - sn * b;
                        c[r][q] = sn * a + cs * b;
                    }
                    for r in 0..n {
                        let (a, b) = (c[p][r], c[q][r]);
                        c[p][r] = cs * a - sn * b;
                        c[q][r] = sn * a + cs * b;
                    }
                }
            }
            if off < 1e-30 {
                break;
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| c[i][i]).collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    fn check_against_dense(p: &SLProblem, elements: usize) {
        let a = assemble(p, &Mesh::uniform(p.domain().length(), elements).unwrap()).unwrap();
        let (k, m) = a.to_dense();
        let want = dense_reference(&k, &m);
        let got = smallest_eigenvalues(&a, a.size()).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-9 * (1.0 + w.abs()), "got {g} want {w}");
        }
    }

    #[test]
    fn matches_dense_solver_on_interval() {
        let p = SLProblem::interval(1.5, std::sync::Arc::new(|t: f64| 1.0 + t.sin()))
            .with_potential(std::sync::Arc::new(|t: f64| t * t))
            .with_conditions(EndCondition::Natural, EndCondition::Dirichlet);
        check_against_dense(&p, 12);
    }

    #[test]
    fn matches_dense_solver_on_circle() {
        let p = SLProblem::circle(2.0 * PI, std::sync::Arc::new(|t: f64| 2.0 + t.cos()));
        check_against_dense(&p, 11);
        let q = SLProblem::circle(1.0, std::sync::Arc::new(|_| 1.0));
        check_against_dense(&q, 3);
    }

    #[test]
    fn discrete_periodic_laplacian_closed_form() {
        // P1 consistent-mass eigenvalues on a uniform circle
        let n = 16;
        let l = 2.0 * PI;
        let h = l / n as f64;
        let a = assemble(
            &SLProblem::constant(Domain::Circle { circumference: l }),
            &Mesh::uniform(l, n).unwrap(),
        )
        .unwrap();
        let got = smallest_eigenvalues(&a, 5).unwrap();
        let disc = |j: f64| {
            let c = (j * h).cos();
            6.0 / (h * h) * (1.0 - c) / (2.0 + c)
        };
        let want = [0.0, disc(1.0), disc(1.0), disc(2.0), disc(2.0)];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-11, "got {g} want {w}");
        }
    }

    #[test]
    fn sturm_count_brackets_each_eigenvalue() {
        let p = SLProblem::interval(1.0, std::sync::Arc::new(|t: f64| 1.0 + t));
        let a = assemble(&p, &Mesh::uniform(1.0, 40).unwrap()).unwrap();
        let ev = smallest_eigenvalues(&a, 6).unwrap();
        for (j, &l) in ev.iter().enumerate().skip(1) {
            assert_eq!(sturm_count(&a, l * (1.0 - 1e-9)), j);
            assert_eq!(sturm_count(&a, l * (1.0 + 1e-9)), j + 1);
        }
    }

    #[test]
    fn too_many_eigenvalues_is_an_error() {
        let p = SLProblem::constant(Domain::Interval { length: 1.0 });
        let a = assemble(&p, &Mesh::uniform(1.0, 3).unwrap()).unwrap();
        assert!(smallest_eigenvalues(&a, 5).is_err());
    }
}
