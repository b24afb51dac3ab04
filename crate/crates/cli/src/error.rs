use std::fmt;
use std::process::ExitCode;

use revlab_core::Error;

/// Failure classes with distinct exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration: exit 2.
    Config(String),
    /// Refinement stopped before certifying the tolerance: exit 3.
    SolverCap(String),
    /// Numerical failure or a violated invariant: exit 4.
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::SolverCap(_) => 3,
            CliError::Numeric(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::SolverCap(m) => write!(f, "solver cap reached: {m}"),
            CliError::Numeric(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::RefinementCap { .. } => CliError::SolverCap(msg),
            Error::Quadrature { .. }
            | Error::DegenerateWeight { .. }
            | Error::SingularMass { .. }
            | Error::EigenNonConvergence { .. }
            | Error::RootFinding(_)
            | Error::UnresolvedCrossing
            | Error::InsufficientModes { .. } => CliError::Numeric(msg),
            _ => CliError::Config(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}
