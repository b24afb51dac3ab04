//! Arclength-parametrized generating curves `(ρ(t), r(t))`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::ambient::AmbientSpace;
use crate::quadrature::GaussRule;
use crate::{Error, Result};

/// Position and velocity of a profile curve at one arclength parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub rho: f64,
    pub r: f64,
    pub drho: f64,
    pub dr: f64,
}

/// Pointwise evaluation of a generating curve on its parameter interval.
pub trait CurveShape: Send + Sync + fmt::Debug {
    fn point(&self, t: f64) -> CurvePoint;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    /// Meets the rotation axis at both ends; sweeps out a sphere.
    SphereLike,
    /// Periodic loop off the axis; sweeps out a torus-like product.
    ClosedLoop,
}

/// Default number of samples used for invariant checks and residuals.
pub const DEFAULT_SAMPLES: usize = 2001;

/// A generating curve parametrized by arclength on `[0, L]`.
#[derive(Clone, Debug)]
pub struct ProfileCurve {
    kind: ProfileKind,
    length: f64,
    breakpoints: Vec<f64>,
    shape: Arc<dyn CurveShape>,
    label: String,
    samples: usize,
}

impl ProfileCurve {
    pub fn from_shape(
        kind: ProfileKind,
        length: f64,
        breakpoints: Vec<f64>,
        shape: Arc<dyn CurveShape>,
        label: impl Into<String>,
    ) -> Self {
        ProfileCurve {
            kind,
            length,
            breakpoints,
            shape,
            label: label.into(),
            samples: DEFAULT_SAMPLES,
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Parameters where the curve is less smooth than elsewhere; quadrature
    /// and meshes place nodes there.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples.max(3);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn point(&self, t: f64) -> CurvePoint {
        let t = match self.kind {
            ProfileKind::ClosedLoop => t.rem_euclid(self.length),
            ProfileKind::SphereLike => t.clamp(0.0, self.length),
        };
        self.shape.point(t)
    }

    #[inline]
    pub fn r(&self, t: f64) -> f64 {
        self.point(t).r
    }

    /// Sample parameters: a uniform grid plus the breakpoints.
    pub fn sample_params(&self) -> Vec<f64> {
        let n = self.samples - 1;
        let mut ts: Vec<f64> = (0..=n).map(|i| self.length * i as f64 / n as f64).collect();
        ts.extend_from_slice(&self.breakpoints);
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ts.dedup();
        ts
    }

    /// Homothety by `c`: arclength and both coordinates scale by `c`.
    pub fn scaled(&self, c: f64) -> ProfileCurve {
        assert!(c > 0.0, "homothety factor must be positive");
        ProfileCurve {
            kind: self.kind,
            length: self.length * c,
            breakpoints: self.breakpoints.iter().map(|b| b * c).collect(),
            shape: Arc::new(Scaled {
                inner: self.shape.clone(),
                factor: c,
            }),
            label: format!("{}*{}", self.label, c),
            samples: self.samples,
        }
    }

    /// Translation along the rotation axis; an ambient isometry.
    pub fn shifted(&self, offset: f64) -> ProfileCurve {
        ProfileCurve {
            shape: Arc::new(Shifted {
                inner: self.shape.clone(),
                offset,
            }),
            label: format!("{}+{}", self.label, offset),
            ..self.clone()
        }
    }

    /// Checks the arclength identity and the kind-specific invariants.
    pub fn validate(&self, ambient: &AmbientSpace, tolerance: f64) -> Result<()> {
        let residual = arclength_residual(self, ambient);
        if !(residual <= tolerance) {
            return Err(Error::NotArclength {
                residual,
                tolerance,
            });
        }
        let ts = self.sample_params();
        match self.kind {
            ProfileKind::SphereLike => {
                let (r0, r1) = (self.r(0.0), self.r(self.length));
                if r0.abs() > tolerance || r1.abs() > tolerance {
                    return Err(Error::NotEmbeddable(format!(
                        "sphere-like profile must meet the axis at both ends (r(0) = {r0}, r(L) = {r1})"
                    )));
                }
                for &t in &ts {
                    let r = self.r(t);
                    let cap = t.min(self.length - t);
                    if r < -tolerance || r > cap + tolerance {
                        return Err(Error::NotEmbeddable(format!(
                            "r({t}) = {r} outside [0, min(t, L - t)]"
                        )));
                    }
                    if r <= 0.0 && t > tolerance && t < self.length - tolerance {
                        return Err(Error::NotEmbeddable(format!("profile touches the axis at t = {t}")));
                    }
                }
            }
            ProfileKind::ClosedLoop => {
                for &t in &ts {
                    if !(self.r(t) > 0.0) {
                        return Err(Error::NotEmbeddable(format!(
                            "closed loop reaches the rotation axis at t = {t}"
                        )));
                    }
                }
                let a = self.shape.point(0.0);
                let b = self.shape.point(self.length);
                if (a.r - b.r).abs() > tolerance.max(1e-9) || (a.rho - b.rho).abs() > tolerance.max(1e-9) {
                    return Err(Error::NotEmbeddable("closed loop is not periodic".into()));
                }
            }
        }
        Ok(())
    }

    /// Unit round sphere profile: `ρ = cos t`, `r = sin t` on `[0, π]`.
    pub fn round_sphere() -> Self {
        Self::from_shape(ProfileKind::SphereLike, PI, vec![], Arc::new(RoundArc), "round_sphere")
    }

    /// Generating circle of radius 1 centred at distance `big_r` from the axis.
    pub fn torus(big_r: f64) -> Result<Self> {
        if !(big_r > 1.0) {
            return Err(Error::NotEmbeddable(format!("torus needs R > 1, got {big_r}")));
        }
        Ok(Self::from_shape(
            ProfileKind::ClosedLoop,
            2.0 * PI,
            vec![],
            Arc::new(TorusLoop { big_r }),
            format!("torus:R={big_r}"),
        ))
    }

    /// Singular limit `r(t) = min(t, L - t)`: two flat balls glued along their rims.
    pub fn glued_limit(length: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!("length {length} must be positive")));
        }
        Ok(Self::from_shape(
            ProfileKind::SphereLike,
            length,
            vec![0.5 * length],
            Arc::new(GluedLimit { length }),
            "glued_limit",
        ))
    }

    /// C² smoothing of the glued limit: `r' = ±1` outside `[L/2 - h, L/2 + h]`.
    pub fn glued_smoothed(length: f64, h: f64, ambient: &AmbientSpace) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!("length {length} must be positive")));
        }
        if !(h > 0.0 && h < 0.25 * length) {
            return Err(Error::InvalidParameter(format!(
                "smoothing scale h = {h} must lie in (0, L/4) with L = {length}"
            )));
        }
        let mid = 0.5 * length;
        Ok(Self::from_shape(
            ProfileKind::SphereLike,
            length,
            vec![mid - h, mid, mid + h],
            Arc::new(GluedBlend {
                length,
                h,
                ambient: ambient.clone(),
                rule: GaussRule::new(16),
            }),
            format!("glued:h={h}"),
        ))
    }

    /// Embedded ellipse loop `r = c + a sin θ`, `ρ = -b cos θ`, rotated about the axis.
    pub fn ellipse_loop(a: f64, b: f64, center: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter(format!("semi-axes must be positive (a = {a}, b = {b})")));
        }
        if !(center > a) {
            return Err(Error::NotEmbeddable(format!(
                "ellipse with centre {center} and radial semi-axis {a} crosses the rotation axis"
            )));
        }
        let shape = EllipseArc::new(a, b, center, 2.0 * PI);
        let length = shape.total_length();
        Ok(Self::from_shape(
            ProfileKind::ClosedLoop,
            length,
            vec![],
            Arc::new(shape),
            format!("ellipse:a={a},b={b},c={center}"),
        ))
    }

    /// Thin ellipse family with semi-axes `(ε, 1/ε)` centred at `2ε`.
    pub fn thin_ellipse(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
        }
        Ok(Self::ellipse_loop(eps, 1.0 / eps, 2.0 * eps)?.with_label(format!("ellipse:eps={eps}")))
    }

    /// Meridian of a spheroid with equatorial radius `a` and polar semi-axis `b`.
    pub fn spheroid(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::InvalidParameter(format!("semi-axes must be positive (a = {a}, b = {b})")));
        }
        let shape = EllipseArc::new(a, b, 0.0, PI);
        let length = shape.total_length();
        Ok(Self::from_shape(
            ProfileKind::SphereLike,
            length,
            vec![],
            Arc::new(shape),
            format!("spheroid:a={a},b={b}"),
        ))
    }

    /// Sphere-like curve with tangent angle
    /// `θ(t) = πt/L + Σ_j a_j sin(2jπ t/L)`.
    ///
    /// The symmetry `θ(L - t) = π - θ(t)` closes the curve on the axis and
    /// `Σ 2j|a_j| < 1` keeps `θ` increasing, so `r > 0` in the interior.
    pub fn tangent_angle(length: f64, coefficients: &[f64], ambient: &AmbientSpace) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!("length {length} must be positive")));
        }
        let slope: f64 = coefficients
            .iter()
            .enumerate()
            .map(|(j, a)| 2.0 * (j + 1) as f64 * a.abs())
            .sum();
        if !(slope < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tangent-angle coefficients must satisfy sum 2j|a_j| < 1 (got {slope})"
            )));
        }
        if ambient.tag() != super::AmbientTag::Euclidean {
            return Err(Error::WrongAmbient {
                expected: "euclidean",
                found: ambient.tag().to_string(),
            });
        }
        let shape = TangentAngle::new(length, coefficients.to_vec());
        Ok(Self::from_shape(
            ProfileKind::SphereLike,
            length,
            vec![],
            Arc::new(shape),
            "tangent_angle",
        ))
    }

    /// Tabulated curve; missing `ρ` values are integrated from the arclength identity.
    pub fn tabulated(
        t: Vec<f64>,
        r: Vec<f64>,
        rho: Option<Vec<f64>>,
        ambient: &AmbientSpace,
        kind: ProfileKind,
    ) -> Result<Self> {
        let shape = Tabulated::new(t, r, rho, ambient)?;
        let length = *shape.t.last().unwrap() - shape.t[0];
        Ok(Self::from_shape(kind, length, vec![], Arc::new(shape), "custom"))
    }
}

/// Max over sample points of `|G(r)^2 ρ'^2 + r'^2 - 1|`.
pub fn arclength_residual(curve: &ProfileCurve, ambient: &AmbientSpace) -> f64 {
    curve
        .sample_params()
        .into_iter()
        .map(|t| {
            let p = curve.point(t);
            let g = ambient.g(p.r);
            (g * g * p.drho * p.drho + p.dr * p.dr - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

#[derive(Debug)]
struct RoundArc;

impl CurveShape for RoundArc {
    fn point(&self, t: f64) -> CurvePoint {
        let (s, c) = t.sin_cos();
        CurvePoint {
            rho: c,
            r: s,
            drho: -s,
            dr: c,
        }
    }
}

#[derive(Debug)]
struct TorusLoop {
    big_r: f64,
}

impl CurveShape for TorusLoop {
    fn point(&self, phi: f64) -> CurvePoint {
        let (s, c) = phi.sin_cos();
        CurvePoint {
            rho: s,
            r: self.big_r + c,
            drho: c,
            dr: -s,
        }
    }
}

#[derive(Debug)]
struct GluedLimit {
    length: f64,
}

impl CurveShape for GluedLimit {
    fn point(&self, t: f64) -> CurvePoint {
        let up = t <= 0.5 * self.length;
        CurvePoint {
            rho: 0.0,
            r: t.min(self.length - t),
            drho: 0.0,
            dr: if up { 1.0 } else { -1.0 },
        }
    }
}

struct GluedBlend {
    length: f64,
    h: f64,
    ambient: AmbientSpace,
    rule: GaussRule,
}

impl fmt::Debug for GluedBlend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GluedBlend").field("length", &self.length).field("h", &self.h).finish()
    }
}

impl GluedBlend {
    /// `(r, r')` of the blend; `r'' = -φ'(s/h)/h` with `φ(x) = (3x - x^3)/2`.
    fn radial(&self, t: f64) -> (f64, f64) {
        let mid = 0.5 * self.length;
        let s = t - mid;
        if s <= -self.h {
            (t, 1.0)
        } else if s >= self.h {
            (self.length - t, -1.0)
        } else {
            let x = s / self.h;
            let x2 = x * x;
            let r = mid - self.h * (0.375 + 0.75 * x2 - 0.125 * x2 * x2);
            (r, -0.5 * x * (3.0 - x2))
        }
    }

    fn rho_speed(&self, t: f64) -> f64 {
        let (r, dr) = self.radial(t);
        (1.0 - dr * dr).max(0.0).sqrt() / self.ambient.g(r)
    }
}

impl CurveShape for GluedBlend {
    fn point(&self, t: f64) -> CurvePoint {
        let (r, dr) = self.radial(t);
        let mid = 0.5 * self.length;
        let lo = mid - self.h;
        let rho = if t <= lo {
            0.0
        } else {
            let hi = t.min(mid + self.h);
            self.rule.integrate(|s| self.rho_speed(s), lo, 0.5 * (lo + hi))
                + self.rule.integrate(|s| self.rho_speed(s), 0.5 * (lo + hi), hi)
        };
        CurvePoint {
            rho,
            r,
            drho: self.rho_speed(t),
            dr,
        }
    }
}

/// Ellipse arc `r = c + a sin θ`, `ρ = -b cos θ` for `θ ∈ [0, Θ]`,
/// reparametrized by arclength through a cumulative table.
struct EllipseArc {
    a: f64,
    b: f64,
    center: f64,
    theta: Vec<f64>,
    arclength: Vec<f64>,
    rule: GaussRule,
}

impl fmt::Debug for EllipseArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EllipseArc")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("center", &self.center)
            .finish()
    }
}

const ELLIPSE_PANELS: usize = 8192;

impl EllipseArc {
    fn new(a: f64, b: f64, center: f64, theta_max: f64) -> Self {
        let rule = GaussRule::new(16);
        let n = ELLIPSE_PANELS;
        let theta: Vec<f64> = (0..=n).map(|i| theta_max * i as f64 / n as f64).collect();
        let speed = |th: f64| (a * a * th.cos().powi(2) + b * b * th.sin().powi(2)).sqrt();
        let mut arclength = Vec::with_capacity(n + 1);
        arclength.push(0.0);
        for w in theta.windows(2) {
            let prev = *arclength.last().unwrap();
            arclength.push(prev + rule.integrate(speed, w[0], w[1]));
        }
        EllipseArc {
            a,
            b,
            center,
            theta,
            arclength,
            rule,
        }
    }

    fn total_length(&self) -> f64 {
        *self.arclength.last().unwrap()
    }

    fn speed(&self, th: f64) -> f64 {
        (self.a * self.a * th.cos().powi(2) + self.b * self.b * th.sin().powi(2)).sqrt()
    }

    fn theta_at(&self, s: f64) -> f64 {
        let n = self.theta.len() - 1;
        let i = match self.arclength.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
            Ok(i) => return self.theta[i],
            Err(i) => i.clamp(1, n) - 1,
        };
        let (s0, s1) = (self.arclength[i], self.arclength[i + 1]);
        let (t0, t1) = (self.theta[i], self.theta[i + 1]);
        let ds = s1 - s0;
        let u = ((s - s0) / ds).clamp(0.0, 1.0);
        let (m0, m1) = (ds / self.speed(t0), ds / self.speed(t1));
        let mut th = hermite(u, t0, t1, m0, m1).clamp(t0, t1);
        for _ in 0..2 {
            let resid = s0 + self.rule.integrate(|x| self.speed(x), t0, th) - s;
            th = (th - resid / self.speed(th)).clamp(t0, t1);
        }
        th
    }
}

impl CurveShape for EllipseArc {
    fn point(&self, t: f64) -> CurvePoint {
        let th = self.theta_at(t);
        let (s, c) = th.sin_cos();
        let v = self.speed(th);
        CurvePoint {
            rho: -self.b * c,
            r: self.center + self.a * s,
            drho: self.b * s / v,
            dr: self.a * c / v,
        }
    }
}

/// Cubic Hermite interpolant on `[0, 1]` with endpoint slopes already scaled by the panel width.
fn hermite(u: f64, y0: f64, y1: f64, m0: f64, m1: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * m0 + (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * m1
}

struct TangentAngle {
    length: f64,
    coefficients: Vec<f64>,
    nodes: Vec<f64>,
    r: Vec<f64>,
    rho: Vec<f64>,
}

impl fmt::Debug for TangentAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TangentAngle")
            .field("length", &self.length)
            .field("coefficients", &self.coefficients)
            .finish()
    }
}

const ANGLE_PANELS: usize = 2048;

impl TangentAngle {
    fn new(length: f64, coefficients: Vec<f64>) -> Self {
        let rule = GaussRule::new(16);
        let mut shape = TangentAngle {
            length,
            coefficients,
            nodes: Vec::new(),
            r: Vec::new(),
            rho: Vec::new(),
        };
        let n = ANGLE_PANELS;
        shape.nodes = (0..=n).map(|i| length * i as f64 / n as f64).collect();
        let mut r = vec![0.0];
        let mut rho = vec![0.0];
        for w in shape.nodes.windows(2) {
            r.push(r.last().unwrap() + rule.integrate(|t| shape.angle(t).cos(), w[0], w[1]));
            rho.push(rho.last().unwrap() + rule.integrate(|t| shape.angle(t).sin(), w[0], w[1]));
        }
        shape.r = r;
        shape.rho = rho;
        shape
    }

    fn angle(&self, t: f64) -> f64 {
        let x = t / self.length;
        PI * x
            + self
                .coefficients
                .iter()
                .enumerate()
                .map(|(j, a)| a * (2.0 * PI * (j + 1) as f64 * x).sin())
                .sum::<f64>()
    }
}

impl CurveShape for TangentAngle {
    fn point(&self, t: f64) -> CurvePoint {
        let n = self.nodes.len() - 1;
        let h = self.length / n as f64;
        let i = ((t / h).floor() as usize).min(n - 1);
        let u = (t - self.nodes[i]) / h;
        let (a0, a1) = (self.angle(self.nodes[i]), self.angle(self.nodes[i + 1]));
        let th = self.angle(t);
        let r = hermite(u, self.r[i], self.r[i + 1], h * a0.cos(), h * a1.cos());
        let rho = hermite(u, self.rho[i], self.rho[i + 1], h * a0.sin(), h * a1.sin());
        CurvePoint {
            rho,
            r: r.max(0.0),
            drho: th.sin(),
            dr: th.cos(),
        }
    }
}

#[derive(Debug)]
struct Tabulated {
    t: Vec<f64>,
    r: Vec<f64>,
    rho: Vec<f64>,
    dr: Vec<f64>,
    drho: Vec<f64>,
}

/// Derivative of the three-point interpolating quadratic at each node:
/// centered in the interior, one-sided at the ends.
fn nodal_derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let j = i.clamp(1, n - 2);
            let (x0, x1, x2) = (t[j - 1], t[j], t[j + 1]);
            let x = t[i];
            y[j - 1] * (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2))
                + y[j] * (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2))
                + y[j + 1] * (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1))
        })
        .collect()
}

impl Tabulated {
    fn new(t: Vec<f64>, r: Vec<f64>, rho: Option<Vec<f64>>, ambient: &AmbientSpace) -> Result<Self> {
        if t.len() < 3 || t.len() != r.len() {
            return Err(Error::InvalidParameter(
                "tabulated curve needs at least 3 rows of equal length".into(),
            ));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("curve parameter must be strictly increasing".into()));
        }
        if t[0] != 0.0 {
            return Err(Error::InvalidParameter("curve parameter must start at 0".into()));
        }
        let dr = nodal_derivative(&t, &r);
        let rho = match rho {
            Some(rho) => {
                if rho.len() != t.len() {
                    return Err(Error::InvalidParameter("rho column length mismatch".into()));
                }
                rho
            }
            None => {
                let speed: Vec<f64> = dr
                    .iter()
                    .zip(&r)
                    .map(|(d, &rr)| (1.0 - d * d).max(0.0).sqrt() / ambient.g(rr))
                    .collect();
                let mut acc = vec![0.0];
                for i in 1..t.len() {
                    acc.push(acc[i - 1] + 0.5 * (speed[i] + speed[i - 1]) * (t[i] - t[i - 1]));
                }
                acc
            }
        };
        let drho = nodal_derivative(&t, &rho);
        Ok(Tabulated { t, r, rho, dr, drho })
    }
}

impl CurveShape for Tabulated {
    fn point(&self, t: f64) -> CurvePoint {
        let n = self.t.len();
        let i = match self.t.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => {
                return CurvePoint {
                    rho: self.rho[i],
                    r: self.r[i],
                    drho: self.drho[i],
                    dr: self.dr[i],
                }
            }
            Err(i) => i.clamp(1, n - 1) - 1,
        };
        let u = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
        let lerp = |v: &[f64]| v[i] + u * (v[i + 1] - v[i]);
        CurvePoint {
            rho: lerp(&self.rho),
            r: lerp(&self.r),
            drho: lerp(&self.drho),
            dr: lerp(&self.dr),
        }
    }
}

#[derive(Debug)]
struct Scaled {
    inner: Arc<dyn CurveShape>,
    factor: f64,
}

impl CurveShape for Scaled {
    fn point(&self, t: f64) -> CurvePoint {
        let p = self.inner.point(t / self.factor);
        CurvePoint {
            rho: p.rho * self.factor,
            r: p.r * self.factor,
            drho: p.drho,
            dr: p.dr,
        }
    }
}

#[derive(Debug)]
struct Shifted {
    inner: Arc<dyn CurveShape>,
    offset: f64,
}

impl CurveShape for Shifted {
    fn point(&self, t: f64) -> CurvePoint {
        let p = self.inner.point(t);
        CurvePoint {
            rho: p.rho + self.offset,
            ..p
        }
    }
}
