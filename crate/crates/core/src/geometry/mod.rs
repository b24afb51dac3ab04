//! Ambient warped spaces, generating curves and induced metrics of revolution.

mod ambient;
mod family;
mod metric;
mod profile;
mod reparam;

pub use ambient::{AmbientSpace, AmbientTag, ScalarFn};
pub use family::{
    build_profile, load_custom_curve, wavy_parameters, Family, FamilySpec, EXACT_ARCLENGTH_TOL,
    TABULATED_ARCLENGTH_TOL,
};
pub use metric::{gamma_half, induced_metric, unit_sphere_volume, RevolutionMetric, VOLUME_REL_TOL};
pub use profile::{arclength_residual, CurvePoint, CurveShape, ProfileCurve, ProfileKind, DEFAULT_SAMPLES};
pub use reparam::{
    envelope_check, reparametrize_unit_measure, EnvelopeCheck, NormalizedParametrization, ENVELOPE_POINTS,
    ENVELOPE_TOL,
};
