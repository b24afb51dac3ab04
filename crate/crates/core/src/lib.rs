//! Invariant Laplace eigenvalues of metrics of revolution.
//!
//! Functions constant on the orbits of the rotation group depend on a single
//! coordinate, so the invariant eigenvalue problem reduces to a weighted
//! Sturm–Liouville problem `-(p u')' + q u = λ w u` on an interval or a circle.
//! The crate is split into three layers:
//!
//! * [`geometry`]: ambient warped spaces, arclength profile curves, induced
//!   metrics and the unit-measure reparametrization.
//! * [`sl`]: P1 finite elements, a Sturm-count bisection eigensolver for
//!   tridiagonal and cyclic pencils, Richardson-certified refinement and
//!   Bessel-zero oracles.
//! * [`lab`]: experiment drivers and their CSV/JSON reports.

pub mod error;
pub mod geometry;
pub mod lab;
pub mod quadrature;
pub mod sl;

pub use error::{Error, Result};
