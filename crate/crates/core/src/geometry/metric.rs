//! Induced metrics `dt^2 + F(r(t))^2 g0` and their invariant weight.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::ambient::{AmbientSpace, AmbientTag, ScalarFn};
use super::profile::{ProfileCurve, ProfileKind};
use crate::quadrature::integrate_piecewise;
use crate::{Error, Result};

/// Relative tolerance used for certified volume quadrature.
pub const VOLUME_REL_TOL: f64 = 1e-13;

/// `Γ(k/2)` for a positive integer `k`, from `Γ(1/2) = √π`, `Γ(1) = 1`
/// and `Γ(x + 1) = x Γ(x)`.
pub fn gamma_half(k: usize) -> f64 {
    assert!(k >= 1);
    let (mut x, mut g) = if k % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    let target = k as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit sphere `S^m ⊂ R^{m+1}`: `2π^{(m+1)/2} / Γ((m+1)/2)`.
pub fn unit_sphere_volume(m: usize) -> f64 {
    2.0 * PI.powf((m + 1) as f64 / 2.0) / gamma_half(m + 1)
}

/// Metric of revolution reduced to its one-dimensional data: the invariant
/// weight `J(t) = ω_{n-1} F(r(t))^{n-1}` and the orbit radius `F(r(t))`.
#[derive(Clone)]
pub struct RevolutionMetric {
    n: usize,
    kind: ProfileKind,
    length: f64,
    ambient: Option<AmbientTag>,
    omega: f64,
    volume: f64,
    volume_error: f64,
    radius: ScalarFn,
    breakpoints: Vec<f64>,
    homogeneous: bool,
    label: String,
}

impl fmt::Debug for RevolutionMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RevolutionMetric")
            .field("label", &self.label)
            .field("n", &self.n)
            .field("kind", &self.kind)
            .field("length", &self.length)
            .field("volume", &self.volume)
            .finish()
    }
}

/// Induced metric on the hypersurface swept out by `curve`.
pub fn induced_metric(curve: &ProfileCurve, ambient: &AmbientSpace, n: usize) -> Result<RevolutionMetric> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension n = {n} must be at least 2")));
    }
    let f = ambient.f_fn();
    let c = curve.clone();
    let radius: ScalarFn = Arc::new(move |t| f(c.r(t)));
    RevolutionMetric::from_parts(
        n,
        curve.kind(),
        curve.length(),
        Some(ambient.tag()),
        radius,
        curve.breakpoints().to_vec(),
        ambient.tag() == AmbientTag::Euclidean,
        curve.label().to_string(),
    )
}

impl RevolutionMetric {
    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        n: usize,
        kind: ProfileKind,
        length: f64,
        ambient: Option<AmbientTag>,
        radius: ScalarFn,
        breakpoints: Vec<f64>,
        homogeneous: bool,
        label: String,
    ) -> Result<Self> {
        let omega = unit_sphere_volume(n - 1);
        let mut metric = RevolutionMetric {
            n,
            kind,
            length,
            ambient,
            omega,
            volume: 0.0,
            volume_error: 0.0,
            radius,
            breakpoints,
            homogeneous,
            label,
        };
        let integral = integrate_piecewise(
            |t| metric.weight(t),
            0.0,
            length,
            &metric.breakpoints,
            VOLUME_REL_TOL,
            0.0,
        )?;
        metric.volume = integral.value;
        metric.volume_error = integral.error;
        Ok(metric)
    }

    /// Flat product `S^1 × S^{n-1}_R`: a unit circle of circumference 2π
    /// times a round sphere of radius `R`, with the rotation acting on the
    /// second factor.
    pub fn flat_product(n: usize, orbit_radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("dimension n = {n} must be at least 2")));
        }
        if !(orbit_radius > 0.0) {
            return Err(Error::InvalidParameter(format!("orbit radius {orbit_radius} must be positive")));
        }
        Self::from_parts(
            n,
            ProfileKind::ClosedLoop,
            2.0 * PI,
            None,
            Arc::new(move |_| orbit_radius),
            vec![],
            true,
            format!("product:R={orbit_radius}"),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn ambient(&self) -> Option<AmbientTag> {
        self.ambient
    }

    /// `ω_{n-1}`.
    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Quadrature error estimate attached to [`volume`](Self::volume).
    pub fn volume_error(&self) -> f64 {
        self.volume_error
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Orbit radius `F(r(t))`.
    #[inline]
    pub fn radius(&self, t: f64) -> f64 {
        (self.radius)(t)
    }

    /// Invariant weight `J(t) = ω_{n-1} F(r(t))^{n-1}`.
    #[inline]
    pub fn weight(&self, t: f64) -> f64 {
        self.omega * self.radius(t).powi(self.n as i32 - 1)
    }

    /// `λ · Vol^{2/n}` for an eigenvalue of this metric.
    pub fn normalize_eigenvalue(&self, lambda: f64) -> f64 {
        lambda * self.volume.powf(2.0 / self.n as f64)
    }

    /// Homothety `g -> c^2 g`. Only defined when the ambient warping is linear.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !self.homogeneous {
            return Err(Error::WrongAmbient {
                expected: "euclidean",
                found: self.ambient.map_or("abstract".into(), |t| t.to_string()),
            });
        }
        if !(c > 0.0) {
            return Err(Error::InvalidParameter(format!("homothety factor {c} must be positive")));
        }
        let inner = self.radius.clone();
        let scale = c.powi(self.n as i32);
        Ok(RevolutionMetric {
            length: self.length * c,
            volume: self.volume * scale,
            volume_error: self.volume_error * scale,
            radius: Arc::new(move |t| c * inner(t / c)),
            breakpoints: self.breakpoints.iter().map(|b| b * c).collect(),
            label: format!("{}*{}", self.label, c),
            ..self.clone()
        })
    }

    /// Homothetic copy of unit volume.
    pub fn unit_volume(&self) -> Result<Self> {
        let c = self.volume.powf(-1.0 / self.n as f64);
        let mut m = self.scaled(c)?;
        m.label = self.label.clone();
        Ok(m)
    }
}
