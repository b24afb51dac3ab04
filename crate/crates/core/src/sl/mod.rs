//! Weighted one-dimensional eigenproblems `-(p u')' + q u = λ w u`.

mod assemble;
mod bessel;
mod eigen;
mod mesh;
mod problem;
mod refine;
mod spectra;

pub use assemble::{assemble, Pencil};
pub use bessel::{bessel_j, bessel_zero};
pub use eigen::{smallest_eigenvalues, sturm_count};
pub use mesh::{Grading, Mesh, GRADING_LAYERS, GRADING_RATIO};
pub use problem::{Domain, EndCondition, SLProblem};
pub use refine::{
    discrete_eigenvalues, initial_mesh, refine_from, refine_until, solve_spectrum, SpectrumResult, DEFAULT_TOL,
    MAX_ELEMENTS, MIN_TOL,
};
pub use spectra::{
    ball_radius, ball_volume, harmonic_multiplicity, invariant_problem, invariant_spectrum, mode_problem,
    mode_spectrum, radial_ball_spectrum, RADIAL_TOL,
};
