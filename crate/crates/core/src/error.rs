use thiserror::Error;

/// Errors raised by geometry construction, the Sturm–Liouville solver and
/// the experiment drivers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown family descriptor `{0}`")]
    UnknownFamily(String),

    #[error("curve is not parametrized by arclength: residual {residual:.3e} exceeds {tolerance:.1e}")]
    NotArclength { residual: f64, tolerance: f64 },

    #[error("profile is not embeddable: {0}")]
    NotEmbeddable(String),

    #[error("ambient space violates its invariants: {0}")]
    InvalidAmbient(String),

    #[error("adaptive quadrature did not converge on [{a}, {b}] (estimate {estimate:.3e})")]
    Quadrature { a: f64, b: f64, estimate: f64 },

    #[error("metric volume is {volume}, expected 1")]
    VolumeNotNormalized { volume: f64 },

    #[error("degenerate profile: invariant weight vanishes on [{a}, {b}]")]
    DegenerateWeight { a: f64, b: f64 },

    #[error("operation requires a {expected} ambient, got {found}")]
    WrongAmbient { expected: &'static str, found: String },

    #[error("invalid boundary condition: {0}")]
    BoundaryCondition(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("mass matrix singular on element [{a}, {b}]")]
    SingularMass { a: f64, b: f64 },

    #[error("eigensolver failed to bracket eigenvalue {index} after {iterations} iterations")]
    EigenNonConvergence { index: usize, iterations: usize },

    #[error("refinement cap of {elements} elements reached without convergence")]
    RefinementCap { elements: usize },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("family does not preserve volume: relative change {relative_change:.3e} at eps = {eps}")]
    VolumeNotPreserved { eps: f64, relative_change: f64 },

    #[error("eigenvalue crossing inside the difference stencil could not be resolved")]
    UnresolvedCrossing,

    #[error("l_max = {l_max} insufficient: modes above it are only bounded below by {lower_bound}, target {target}")]
    InsufficientModes { l_max: usize, lower_bound: f64, target: f64 },

    #[error("report schema mismatch: {0}")]
    Schema(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
