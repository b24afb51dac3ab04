//! Warped ambient spaces `G(r)^2 dρ^2 + dr^2 + F(r)^2 g0`.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmbientTag {
    Euclidean,
    Hyperbolic,
    Custom,
}

impl fmt::Display for AmbientTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AmbientTag::Euclidean => "euclidean",
            AmbientTag::Hyperbolic => "hyperbolic",
            AmbientTag::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Rotationally symmetric ambient metric described by its warping
/// profile `F` and the rotation coefficient `G`.
#[derive(Clone)]
pub struct AmbientSpace {
    tag: AmbientTag,
    r_max: f64,
    f: ScalarFn,
    df: ScalarFn,
    g: ScalarFn,
    dg: ScalarFn,
}

impl fmt::Debug for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AmbientSpace")
            .field("tag", &self.tag)
            .field("r_max", &self.r_max)
            .finish()
    }
}

/// Number of samples used to check monotonicity and positivity of custom profiles.
const CHECK_SAMPLES: usize = 1024;

impl AmbientSpace {
    pub fn euclidean() -> Self {
        AmbientSpace {
            tag: AmbientTag::Euclidean,
            r_max: f64::INFINITY,
            f: Arc::new(|r| r),
            df: Arc::new(|_| 1.0),
            g: Arc::new(|_| 1.0),
            dg: Arc::new(|_| 0.0),
        }
    }

    pub fn hyperbolic() -> Self {
        AmbientSpace {
            tag: AmbientTag::Hyperbolic,
            r_max: f64::INFINITY,
            f: Arc::new(f64::sinh),
            df: Arc::new(f64::cosh),
            g: Arc::new(f64::cosh),
            dg: Arc::new(f64::sinh),
        }
    }

    /// Custom warped space on `[0, r_max)`. `F(0) = 0`, `F` strictly
    /// increasing and `G > 0` are checked on a uniform sampling grid.
    pub fn custom(r_max: f64, f: ScalarFn, df: ScalarFn, g: ScalarFn, dg: ScalarFn) -> Result<Self> {
        if !(r_max > 0.0) {
            return Err(Error::InvalidAmbient(format!("r_max = {r_max} must be positive")));
        }
        if f(0.0).abs() > 1e-12 {
            return Err(Error::InvalidAmbient(format!("F(0) = {} != 0", f(0.0))));
        }
        let top = if r_max.is_finite() { r_max } else { 10.0 };
        let mut prev = f(0.0);
        for i in 1..CHECK_SAMPLES {
            let r = top * i as f64 / CHECK_SAMPLES as f64;
            let v = f(r);
            if !(v > prev) {
                return Err(Error::InvalidAmbient(format!("F not strictly increasing near r = {r}")));
            }
            prev = v;
        }
        for i in 0..CHECK_SAMPLES {
            let r = top * i as f64 / CHECK_SAMPLES as f64;
            if !(g(r) > 0.0) {
                return Err(Error::InvalidAmbient(format!("G({r}) = {} is not positive", g(r))));
            }
        }
        Ok(AmbientSpace {
            tag: AmbientTag::Custom,
            r_max,
            f,
            df,
            g,
            dg,
        })
    }

    pub fn tag(&self) -> AmbientTag {
        self.tag
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    #[inline]
    pub fn f(&self, r: f64) -> f64 {
        (self.f)(r)
    }

    #[inline]
    pub fn df(&self, r: f64) -> f64 {
        (self.df)(r)
    }

    #[inline]
    pub fn g(&self, r: f64) -> f64 {
        (self.g)(r)
    }

    #[inline]
    pub fn dg(&self, r: f64) -> f64 {
        (self.dg)(r)
    }

    /// `F^{n-1}` as a standalone closure, handy for weights.
    pub(crate) fn f_fn(&self) -> ScalarFn {
        self.f.clone()
    }
}
