//! String descriptors for the profile families used in configs and on the CLI.
//!
//! ```text
//! round_sphere:n=2
//! glued:h=1e-3,n=2[,L=2]
//! glued_limit[:L=2]
//! torus:R=10
//! ellipse:eps=0.1[,a=..,b=..,c=..]
//! spheroid:a=1.2,b=0.8
//! wavy:seed=7[,L=..]
//! custom:path=curve.csv
//! ```
//!
//! Every descriptor also accepts `n=<dim>` and `ambient=euclidean|hyperbolic`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ambient::{AmbientSpace, AmbientTag};
use super::profile::{ProfileCurve, ProfileKind};
use crate::{Error, Result};

/// Arclength tolerance for closed-form families.
pub const EXACT_ARCLENGTH_TOL: f64 = 1e-10;
/// Arclength tolerance for tabulated curves differentiated by finite differences.
pub const TABULATED_ARCLENGTH_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    RoundSphere,
    Glued { h: f64, length: f64 },
    GluedLimit { length: f64 },
    Torus { big_r: f64 },
    Ellipse { eps: f64, a: f64, b: f64, center: f64 },
    Spheroid { a: f64, b: f64 },
    Wavy { seed: u64, length: Option<f64> },
    Custom { path: PathBuf },
}

/// A parsed descriptor: the family plus optional dimension and ambient.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: Option<usize>,
    pub ambient: AmbientTag,
    source: String,
}

impl FamilySpec {
    pub fn descriptor(&self) -> &str {
        &self.source
    }

    pub fn ambient_space(&self) -> AmbientSpace {
        match self.ambient {
            AmbientTag::Hyperbolic => AmbientSpace::hyperbolic(),
            _ => AmbientSpace::euclidean(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

fn parse_params(s: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got `{part}`")))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn take<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match map.remove(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("cannot parse {key} = `{v}`"))),
    }
}

fn require<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str, family: &str) -> Result<T> {
    take(map, key)?.ok_or_else(|| Error::InvalidParameter(format!("{family} requires `{key}`")))
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut p = parse_params(rest)?;
        let n = take::<usize>(&mut p, "n")?;
        let ambient = match p.remove("ambient").as_deref() {
            None | Some("euclidean") => AmbientTag::Euclidean,
            Some("hyperbolic") => AmbientTag::Hyperbolic,
            Some(other) => return Err(Error::InvalidParameter(format!("unknown ambient `{other}`"))),
        };
        let family = match name.trim() {
            "round_sphere" | "round" => Family::RoundSphere,
            "glued" => Family::Glued {
                h: require(&mut p, "h", "glued")?,
                length: take(&mut p, "L")?.unwrap_or(2.0),
            },
            "glued_limit" => Family::GluedLimit {
                length: take(&mut p, "L")?.unwrap_or(2.0),
            },
            "torus" => Family::Torus {
                big_r: require(&mut p, "R", "torus")?,
            },
            "ellipse" => {
                let eps: f64 = require(&mut p, "eps", "ellipse")?;
                Family::Ellipse {
                    eps,
                    a: take(&mut p, "a")?.unwrap_or(eps),
                    b: take(&mut p, "b")?.unwrap_or(1.0 / eps),
                    center: take(&mut p, "c")?.unwrap_or(2.0 * eps),
                }
            }
            "spheroid" => Family::Spheroid {
                a: require(&mut p, "a", "spheroid")?,
                b: require(&mut p, "b", "spheroid")?,
            },
            "wavy" => Family::Wavy {
                seed: require(&mut p, "seed", "wavy")?,
                length: take(&mut p, "L")?,
            },
            "custom" => Family::Custom {
                path: PathBuf::from(
                    p.remove("path")
                        .ok_or_else(|| Error::InvalidParameter("custom requires `path`".into()))?,
                ),
            },
            _ => return Err(Error::UnknownFamily(s.to_string())),
        };
        if let Some(k) = p.keys().next() {
            return Err(Error::InvalidParameter(format!("unexpected key `{k}` in `{s}`")));
        }
        Ok(FamilySpec {
            family,
            n,
            ambient,
            source: s.to_string(),
        })
    }
}

/// Tangent-angle coefficients and length of the `wavy:seed=..` family.
pub fn wavy_parameters(seed: u64) -> (f64, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let length = rng.gen_range(1.0..4.0);
    let coefficients = (1..=3)
        .map(|j| rng.gen_range(-0.15..0.15) / j as f64)
        .collect();
    (length, coefficients)
}

/// Builds and validates the profile curve of a family descriptor.
pub fn build_profile(spec: &FamilySpec) -> Result<ProfileCurve> {
    let ambient = spec.ambient_space();
    let (curve, tol) = match &spec.family {
        Family::RoundSphere => (ProfileCurve::round_sphere(), EXACT_ARCLENGTH_TOL),
        Family::Glued { h, length } => (ProfileCurve::glued_smoothed(*length, *h, &ambient)?, EXACT_ARCLENGTH_TOL),
        Family::GluedLimit { length } => (ProfileCurve::glued_limit(*length)?, EXACT_ARCLENGTH_TOL),
        Family::Torus { big_r } => (ProfileCurve::torus(*big_r)?, EXACT_ARCLENGTH_TOL),
        Family::Ellipse { eps, a, b, center } => {
            if !(*eps > 0.0) {
                return Err(Error::InvalidParameter(format!("eps = {eps} must be positive")));
            }
            (ProfileCurve::ellipse_loop(*a, *b, *center)?, EXACT_ARCLENGTH_TOL)
        }
        Family::Spheroid { a, b } => (ProfileCurve::spheroid(*a, *b)?, EXACT_ARCLENGTH_TOL),
        Family::Wavy { seed, length } => {
            let (l, coefficients) = wavy_parameters(*seed);
            (
                ProfileCurve::tangent_angle(length.unwrap_or(l), &coefficients, &ambient)?,
                EXACT_ARCLENGTH_TOL,
            )
        }
        Family::Custom { path } => (load_custom_curve(path, &ambient)?, TABULATED_ARCLENGTH_TOL),
    };
    let curve = curve.with_label(spec.descriptor());
    curve.validate(&ambient, tol)?;
    Ok(curve)
}

/// Reads a `t,r[,rho]` CSV with a header row.
///
/// Curves meeting the axis at both ends are sphere-like; anything else is
/// treated as a closed loop.
pub fn load_custom_curve(path: &Path, ambient: &AmbientSpace) -> Result<ProfileCurve> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.to_ascii_lowercase()).collect();
    let expect = |i: usize, name: &str| header.get(i).map(String::as_str) == Some(name);
    if !(expect(0, "t") && expect(1, "r")) || header.len() > 3 || (header.len() == 3 && !expect(2, "rho")) {
        return Err(Error::Schema(format!("custom curve header must be `t,r[,rho]`, got {header:?}")));
    }
    let mut t = Vec::new();
    let mut r = Vec::new();
    let mut rho = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::Schema("short row".into()))?
                .parse()
                .map_err(|_| Error::Schema(format!("non-numeric value in row {:?}", rec)))
        };
        t.push(num(0)?);
        r.push(num(1)?);
        if header.len() == 3 {
            rho.push(num(2)?);
        }
    }
    if t.is_empty() {
        return Err(Error::Schema("custom curve has no rows".into()));
    }
    let kind = if r[0].abs() < 1e-9 && r.last().unwrap().abs() < 1e-9 {
        ProfileKind::SphereLike
    } else {
        ProfileKind::ClosedLoop
    };
    ProfileCurve::tabulated(t, r, (header.len() == 3).then_some(rho), ambient, kind)
}
