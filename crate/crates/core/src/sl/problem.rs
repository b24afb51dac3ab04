use std::fmt;
use std::sync::Arc;

use crate::geometry::ScalarFn;
use crate::{Error, Result};

/// Interval `[0, L]` or circle of circumference `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Interval { length: f64 },
    Circle { circumference: f64 },
}

impl Domain {
    pub fn length(&self) -> f64 {
        match *self {
            Domain::Interval { length } => length,
            Domain::Circle { circumference } => circumference,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Domain::Circle { .. })
    }
}

/// Endpoint condition of an interval problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndCondition {
    /// No essential constraint; the right choice where the weight vanishes.
    Natural,
    /// `w u' = 0`; only meaningful where `w` is bounded away from zero.
    Neumann,
    /// `u = 0`.
    Dirichlet,
}

/// Weighted eigenproblem `-(p u')' + q u = λ w u`, with `p = w` unless a
/// separate conduction coefficient is supplied.
#[derive(Clone)]
pub struct SLProblem {
    domain: Domain,
    left: EndCondition,
    right: EndCondition,
    weight: ScalarFn,
    conduction: Option<ScalarFn>,
    potential: Option<ScalarFn>,
    singular_left: bool,
    singular_right: bool,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for SLProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SLProblem")
            .field("domain", &self.domain)
            .field("left", &self.left)
            .field("right", &self.right)
            .field("singular", &(self.singular_left, self.singular_right))
            .field("has_potential", &self.potential.is_some())
            .finish()
    }
}

const VALIDATION_SAMPLES: usize = 257;

impl SLProblem {
    pub fn interval(length: f64, weight: ScalarFn) -> Self {
        SLProblem {
            domain: Domain::Interval { length },
            left: EndCondition::Natural,
            right: EndCondition::Natural,
            weight,
            conduction: None,
            potential: None,
            singular_left: false,
            singular_right: false,
            breakpoints: Vec::new(),
        }
    }

    pub fn circle(circumference: f64, weight: ScalarFn) -> Self {
        SLProblem {
            domain: Domain::Circle { circumference },
            ..Self::interval(circumference, weight)
        }
    }

    /// Constant-coefficient problem `-u'' = λ u`, mostly for checks.
    pub fn constant(domain: Domain) -> Self {
        let mut p = Self::interval(domain.length(), Arc::new(|_| 1.0));
        p.domain = domain;
        p
    }

    pub fn with_conditions(mut self, left: EndCondition, right: EndCondition) -> Self {
        self.left = left;
        self.right = right;
        self
    }

    pub fn with_potential(mut self, q: ScalarFn) -> Self {
        self.potential = Some(q);
        self
    }

    pub fn with_conduction(mut self, p: ScalarFn) -> Self {
        self.conduction = Some(p);
        self
    }

    /// Marks endpoints where the weight degenerates; meshes are graded there.
    pub fn with_singular_ends(mut self, left: bool, right: bool) -> Self {
        self.singular_left = left;
        self.singular_right = right;
        self
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn conditions(&self) -> (EndCondition, EndCondition) {
        (self.left, self.right)
    }

    pub fn singular_ends(&self) -> (bool, bool) {
        (self.singular_left, self.singular_right)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    #[inline]
    pub fn weight(&self, t: f64) -> f64 {
        (self.weight)(t)
    }

    #[inline]
    pub fn conduction(&self, t: f64) -> f64 {
        match &self.conduction {
            Some(p) => p(t),
            None => (self.weight)(t),
        }
    }

    #[inline]
    pub fn potential(&self, t: f64) -> f64 {
        self.potential.as_ref().map_or(0.0, |q| q(t))
    }

    pub fn has_potential(&self) -> bool {
        self.potential.is_some()
    }

    /// Sampled checks of the coefficient and boundary-condition invariants.
    pub fn validate(&self) -> Result<()> {
        let l = self.domain.length();
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!("domain length {l} must be positive")));
        }
        let n = VALIDATION_SAMPLES;
        let mut w_max: f64 = 0.0;
        for i in 1..n {
            let t = l * i as f64 / n as f64;
            let (w, p, q) = (self.weight(t), self.conduction(t), self.potential(t));
            if !(w > 0.0) || !(p > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "weight and conduction must be positive in the interior (t = {t}: w = {w}, p = {p})"
                )));
            }
            if !(q >= 0.0) {
                return Err(Error::InvalidParameter(format!("potential q({t}) = {q} is negative")));
            }
            w_max = w_max.max(w);
        }
        let floor = 1e-12 * w_max;
        let w0 = self.weight(0.0);
        let w1 = self.weight(l);
        if w0 < 0.0 || w1 < 0.0 {
            return Err(Error::InvalidParameter("weight is negative at an endpoint".into()));
        }
        if self.domain.is_periodic() {
            if (w0 - w1).abs() > 1e-9 * w_max || (self.potential(0.0) - self.potential(l)).abs() > 1e-9 * (1.0 + self.potential(0.0).abs()) {
                return Err(Error::BoundaryCondition("periodic problem needs periodic coefficients".into()));
            }
            return Ok(());
        }
        for (cond, w, singular, side) in [
            (self.left, w0, self.singular_left, "left"),
            (self.right, w1, self.singular_right, "right"),
        ] {
            let degenerate = w <= floor;
            match cond {
                EndCondition::Neumann if degenerate => {
                    return Err(Error::BoundaryCondition(format!(
                        "Neumann condition at the {side} end needs a weight bounded away from zero"
                    )))
                }
                EndCondition::Dirichlet if degenerate && !singular => {
                    return Err(Error::BoundaryCondition(format!(
                        "Dirichlet condition at a degenerate {side} end must be flagged singular"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}
