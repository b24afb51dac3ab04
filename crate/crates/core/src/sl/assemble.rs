//! P1 stiffness and mass matrices with two-point Gauss quadrature per element.

use super::mesh::Mesh;
use super::problem::{EndCondition, SLProblem};
use crate::{Error, Result};

/// Symmetric tridiagonal pencil `(K, M)`; periodic problems add the corner
/// entry coupling the first and last unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct Pencil {
    pub k_diag: Vec<f64>,
    pub k_off: Vec<f64>,
    pub m_diag: Vec<f64>,
    pub m_off: Vec<f64>,
    pub k_corner: f64,
    pub m_corner: f64,
    pub periodic: bool,
    /// Coordinates of the unknowns.
    pub dofs: Vec<f64>,
}

impl Pencil {
    pub fn size(&self) -> usize {
        self.k_diag.len()
    }

    /// Dense copies of `K` and `M`, for checks on small systems.
    pub fn to_dense(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let n = self.size();
        let mut k = vec![vec![0.0; n]; n];
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            k[i][i] = self.k_diag[i];
            m[i][i] = self.m_diag[i];
        }
        for i in 0..self.k_off.len() {
            k[i][i + 1] = self.k_off[i];
            k[i + 1][i] = self.k_off[i];
            m[i][i + 1] = self.m_off[i];
            m[i + 1][i] = self.m_off[i];
        }
        if self.periodic {
            k[0][n - 1] += self.k_corner;
            k[n - 1][0] += self.k_corner;
            m[0][n - 1] += self.m_corner;
            m[n - 1][0] += self.m_corner;
        }
        (k, m)
    }
}

const GAUSS_OFFSET: f64 = 0.288_675_134_594_812_9; // 1 / (2√3)

/// Assembles `K_ij = ∫ p φ_i' φ_j' + ∫ q φ_i φ_j` and `M_ij = ∫ w φ_i φ_j`
/// over hat functions, eliminating Dirichlet unknowns.
pub fn assemble(problem: &SLProblem, mesh: &Mesh) -> Result<Pencil> {
    let domain = problem.domain();
    let x = mesh.nodes();
    if (x[0]).abs() > 1e-12 * domain.length() || (x[x.len() - 1] - domain.length()).abs() > 1e-12 * domain.length() {
        return Err(Error::InvalidMesh(format!(
            "mesh [{}, {}] does not match domain length {}",
            x[0],
            x[x.len() - 1],
            domain.length()
        )));
    }
    let ne = mesh.elements();
    let periodic = domain.is_periodic();
    if periodic && ne < 3 {
        return Err(Error::InvalidMesh("periodic meshes need at least 3 elements".into()));
    }
    // global node count before elimination
    let nn = if periodic { ne } else { ne + 1 };
    let mut kd = vec![0.0; nn];
    let mut md = vec![0.0; nn];
    let mut ko = vec![0.0; nn.saturating_sub(1)];
    let mut mo = vec![0.0; nn.saturating_sub(1)];
    let mut k_corner = 0.0;
    let mut m_corner = 0.0;
    for e in 0..ne {
        let (a, b) = (x[e], x[e + 1]);
        let h = b - a;
        let mid = 0.5 * (a + b);
        let mut ke = [0.0; 3]; // (ll, lr, rr)
        let mut me = [0.0; 3];
        for s in [-1.0, 1.0] {
            let xg = mid + s * GAUSS_OFFSET * h;
            let wq = 0.5 * h;
            let phi_r = (xg - a) / h;
            let phi_l = 1.0 - phi_r;
            let p = problem.conduction(xg);
            let q = problem.potential(xg);
            let w = problem.weight(xg);
            let dd = p / (h * h);
            ke[0] += wq * (dd + q * phi_l * phi_l);
            ke[1] += wq * (-dd + q * phi_l * phi_r);
            ke[2] += wq * (dd + q * phi_r * phi_r);
            me[0] += wq * w * phi_l * phi_l;
            me[1] += wq * w * phi_l * phi_r;
            me[2] += wq * w * phi_r * phi_r;
        }
        if !(me[0] + 2.0 * me[1] + me[2] > 0.0) {
            return Err(Error::SingularMass { a, b });
        }
        let (i, j) = (e, if periodic && e == ne - 1 { 0 } else { e + 1 });
        kd[i] += ke[0];
        kd[j] += ke[2];
        md[i] += me[0];
        md[j] += me[2];
        if periodic && e == ne - 1 {
            k_corner += ke[1];
            m_corner += me[1];
        } else {
            ko[e] += ke[1];
            mo[e] += me[1];
        }
    }
    let mut dofs: Vec<f64> = x[..nn].to_vec();
    if !periodic {
        let (left, right) = problem.conditions();
        if right == EndCondition::Dirichlet {
            kd.pop();
            md.pop();
            ko.pop();
            mo.pop();
            dofs.pop();
        }
        if left == EndCondition::Dirichlet {
            kd.remove(0);
            md.remove(0);
            if !ko.is_empty() {
                ko.remove(0);
                mo.remove(0);
            }
            dofs.remove(0);
        }
        if kd.is_empty() {
            return Err(Error::InvalidMesh("no unknowns left after Dirichlet elimination".into()));
        }
    }
    Ok(Pencil {
        k_diag: kd,
        k_off: ko,
        m_diag: md,
        m_off: mo,
        k_corner,
        m_corner,
        periodic,
        dofs,
    })
}
