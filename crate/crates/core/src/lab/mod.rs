//! Experiments on invariant spectra: the sharp bound for embedded spheres,
//! conformal concentration, tori and ellipses, the extremality probe and
//! the index `m(k, g)`.

mod bound;
mod concentration;
mod mindex;
mod probe;
mod report;
mod surfaces;

pub use bound::{bound_report, extremal_sequence, limit_bound, limit_bounds, literal_bound, profile_rows, GLUED_LENGTH};
pub use concentration::{
    concentration_experiment, concentration_point, final_decade_fit, neumann_piece_eigenvalue, ConcentrationConfig,
    ConformalFactor, CONCENTRATION_TOL, DEFAULT_DELTAS, DEFAULT_EPS, DEFAULT_SMOOTHING,
};
pub use mindex::{
    certified_l_max, degree_lower_bound, m_escalation, m_index, m_index_auto, product_lattice_count,
    EscalationFamily, MIndex, MINDEX_TOL, TIE_GAP,
};
pub use probe::{extremality_probe, ProbeFamily, DEFAULT_STEP, PROBE_TOL};
pub use report::{
    fmt_num, BoundReport, BoundRow, DerivativeEstimate, ProbeReport, SkippedProfile, SweepKind, SweepReport,
    SweepRow,
};
pub use surfaces::{
    ellipse_sweep, ellipse_sweep_with_center, torus_sweep, DEFAULT_ELLIPSE_EPS, DEFAULT_TORUS_RADII,
    ELLIPSE_CENTER_RATIO,
};
