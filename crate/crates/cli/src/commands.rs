//! One function per subcommand, each turning a [`RunConfig`] into an [`Outcome`].

use std::fs;

use rayon::prelude::*;
use revlab_core::geometry::{build_profile, induced_metric, AmbientSpace, Family, FamilySpec, RevolutionMetric};
use revlab_core::lab::{
    self, fmt_num, ConcentrationConfig, EscalationFamily, ProbeFamily, CONCENTRATION_TOL, DEFAULT_DELTAS,
    DEFAULT_ELLIPSE_EPS, DEFAULT_EPS, DEFAULT_SMOOTHING, DEFAULT_STEP, DEFAULT_TORUS_RADII, ELLIPSE_CENTER_RATIO,
};
use revlab_core::sl::{harmonic_multiplicity, mode_spectrum, SpectrumResult, DEFAULT_TOL};
use serde::Serialize;

use crate::cache::{cached, SpectrumKey};
use crate::config::RunConfig;
use crate::error::CliError;

/// Convergence flag of one output row, recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowStatus {
    pub label: String,
    pub converged: bool,
}

/// Rendered report plus what the manifest and exit status need.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub csv: String,
    pub json: String,
    pub rows: Vec<RowStatus>,
    /// Violated invariants; any entry makes the run exit with code 4.
    pub violations: Vec<String>,
    /// Human-readable findings printed to stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new<T: Serialize>(csv: String, value: &T, rows: Vec<RowStatus>) -> Result<Self, CliError> {
        let json = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
        Ok(Outcome {
            csv,
            json,
            rows,
            violations: Vec::new(),
            notes: Vec::new(),
        })
    }
}

pub fn dispatch(c: &RunConfig) -> Result<Outcome, CliError> {
    match c.command() {
        "spectrum" => spectrum(c),
        "modes" => modes(c),
        "bound" => bound(c),
        "extremal-seq" => extremal_seq(c),
        "concentrate" => concentrate(c),
        "torus" => torus(c),
        "ellipse" => ellipse(c),
        "probe" => probe(c),
        "mindex" => mindex(c),
        other => Err(CliError::Config(format!("unknown command `{other}`"))),
    }
}

fn parse_families(c: &RunConfig) -> Result<Vec<FamilySpec>, CliError> {
    c.family
        .iter()
        .map(|s| s.parse::<FamilySpec>().map_err(CliError::from))
        .collect()
}

fn tol(c: &RunConfig) -> f64 {
    c.tol.unwrap_or(DEFAULT_TOL)
}

fn grid(c: &RunConfig, default: &[f64]) -> Vec<f64> {
    c.grid.clone().unwrap_or_else(|| default.to_vec())
}

fn sweep_rows(report: &lab::SweepReport) -> Vec<RowStatus> {
    report
        .rows
        .iter()
        .map(|r| RowStatus {
            label: fmt_num(r.parameter),
            converged: r.converged,
        })
        .collect()
}

fn write_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Numeric(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numeric(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Dimension from the descriptor or `--n`, which must agree when both are set.
fn dimension(spec: &FamilySpec, c: &RunConfig) -> Result<usize, CliError> {
    match (spec.n, c.n) {
        (Some(a), Some(b)) if a != b => Err(CliError::Config(format!(
            "`{}` sets n = {a} but --n is {b}",
            spec.descriptor()
        ))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Ok(2),
    }
}

fn metric(spec: &FamilySpec, n: usize) -> Result<RevolutionMetric, CliError> {
    let curve = build_profile(spec)?;
    Ok(induced_metric(&curve, &spec.ambient_space(), n)?)
}

fn source_bytes(spec: &FamilySpec) -> Result<Option<String>, CliError> {
    match &spec.family {
        Family::Custom { path } => fs::read_to_string(path)
            .map(Some)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display()))),
        _ => Ok(None),
    }
}

fn cached_mode_spectrum(spec: &FamilySpec, n: usize, l: usize, k: usize, tol: f64) -> Result<SpectrumResult, CliError> {
    let key = SpectrumKey {
        version: env!("CARGO_PKG_VERSION"),
        descriptor: spec.descriptor(),
        source: source_bytes(spec)?,
        n,
        l,
        k,
        tol,
    };
    cached(&key, || -> Result<SpectrumResult, CliError> {
        let m = metric(spec, n)?;
        Ok(mode_spectrum(&m, l, k, tol)?)
    })
}

#[derive(Debug, Serialize)]
struct SpectrumEntry {
    family: String,
    n: usize,
    l: usize,
    multiplicity: u64,
    spectrum: SpectrumResult,
}

fn mode_table(c: &RunConfig, degrees: &[usize], with_degree: bool) -> Result<Outcome, CliError> {
    let specs = parse_families(c)?;
    if specs.is_empty() {
        return Err(CliError::Config("at least one --family is required".into()));
    }
    let k = c.k.unwrap_or(3);
    let tol = tol(c);
    let jobs: Vec<(FamilySpec, usize, usize)> = specs
        .iter()
        .map(|s| dimension(s, c).map(|n| (s.clone(), n)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flat_map(|(s, n)| degrees.iter().map(move |&l| (s.clone(), n, l)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|(s, n, l)| {
            Ok(SpectrumEntry {
                family: s.descriptor().to_string(),
                n: *n,
                l: *l,
                multiplicity: harmonic_multiplicity(*n, *l),
                spectrum: cached_mode_spectrum(s, *n, *l, k, tol)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Vec::new();
    for e in &entries {
        for (i, (v, err)) in e.spectrum.eigenvalues.iter().zip(&e.spectrum.error_estimates).enumerate() {
            let mut row = vec![e.family.clone()];
            if with_degree {
                row.push(e.l.to_string());
                row.push(e.multiplicity.to_string());
            }
            row.extend([i.to_string(), fmt_num(*v), fmt_num(*err)]);
            table.push(row);
        }
    }
    let header: &[&str] = if with_degree {
        &["family", "l", "multiplicity", "index", "eigenvalue", "error_estimate"]
    } else {
        &["family", "index", "eigenvalue", "error_estimate"]
    };
    let rows = entries
        .iter()
        .map(|e| RowStatus {
            label: if with_degree { format!("{} l={}", e.family, e.l) } else { e.family.clone() },
            converged: e.spectrum.converged,
        })
        .collect();
    Outcome::new(write_table(header, table)?, &entries, rows)
}

fn spectrum(c: &RunConfig) -> Result<Outcome, CliError> {
    mode_table(c, &[0], false)
}

fn modes(c: &RunConfig) -> Result<Outcome, CliError> {
    let degrees = c.l.clone().unwrap_or_else(|| vec![0, 1, 2, 3]);
    if degrees.is_empty() {
        return Err(CliError::Config("the degree list is empty".into()));
    }
    mode_table(c, &degrees, true)
}

/// Admissible random profiles used when `bound` gets no `--family`.
pub const DEFAULT_BOUND_PROFILES: u64 = 20;

fn bound(c: &RunConfig) -> Result<Outcome, CliError> {
    let mut specs = parse_families(c)?;
    if specs.is_empty() {
        specs.push("round_sphere".parse()?);
        for seed in 0..DEFAULT_BOUND_PROFILES {
            specs.push(format!("wavy:seed={seed}").parse()?);
        }
    }
    let n = c.n.unwrap_or(2);
    let report = lab::bound_report(&specs, n, c.k.unwrap_or(5), tol(c))?;
    let rows = report
        .rows
        .iter()
        .map(|r| RowStatus {
            label: format!("{} k={}", r.profile, r.k),
            converged: r.converged,
        })
        .collect();
    let mut out = Outcome::new(report.to_csv()?, &report, rows)?;
    for r in &report.rows {
        if !(r.margin > 0.0) {
            out.violations
                .push(format!("{} k={}: margin {} is not positive", r.profile, r.k, r.margin));
        }
    }
    for s in &report.skipped {
        out.notes.push(format!("skipped {}: {}", s.profile, s.reason));
    }
    Ok(out)
}

fn ambient(c: &RunConfig) -> Result<AmbientSpace, CliError> {
    match c.ambient.as_deref().unwrap_or("euclidean") {
        "euclidean" => Ok(AmbientSpace::euclidean()),
        "hyperbolic" => Ok(AmbientSpace::hyperbolic()),
        other => Err(CliError::Config(format!("unknown ambient `{other}`"))),
    }
}

fn extremal_seq(c: &RunConfig) -> Result<Outcome, CliError> {
    let report = lab::extremal_sequence(
        &ambient(c)?,
        c.n.unwrap_or(2),
        c.k.unwrap_or(1),
        &grid(c, &[1e-1, 1e-2, 1e-3]),
        tol(c),
    )?;
    let mut out = Outcome::new(report.to_csv()?, &report, sweep_rows(&report))?;
    let bound = report.summary["bound"];
    for r in &report.rows {
        if !(r.product < bound) {
            out.violations
                .push(format!("h = {}: product {} is not below the bound {bound}", r.parameter, r.product));
        }
    }
    out.notes.push(format!("final relative gap {:.3e}", report.summary["final_relative_gap"]));
    Ok(out)
}

fn concentrate(c: &RunConfig) -> Result<Outcome, CliError> {
    let config = ConcentrationConfig {
        n: c.n.unwrap_or(3),
        deltas: grid(c, &DEFAULT_DELTAS),
        eps: c.eps.unwrap_or(DEFAULT_EPS),
        smoothing: c.smoothing.unwrap_or(DEFAULT_SMOOTHING),
        flat: c.flat.unwrap_or(false),
        tol: c.tol.unwrap_or(CONCENTRATION_TOL),
    };
    let report = lab::concentration_experiment(&config)?;
    let mut out = Outcome::new(report.to_csv()?, &report, sweep_rows(&report))?;
    if let (Some(s), Some(g)) = (
        report.summary.get("final_decade_slope"),
        report.summary.get("final_decade_growth"),
    ) {
        out.notes.push(format!("final decade: slope {s:.4}, growth {g:.4e}"));
    }
    Ok(out)
}

fn torus(c: &RunConfig) -> Result<Outcome, CliError> {
    let report = lab::torus_sweep(&grid(c, &DEFAULT_TORUS_RADII), tol(c))?;
    Outcome::new(report.to_csv()?, &report, sweep_rows(&report))
}

fn ellipse(c: &RunConfig) -> Result<Outcome, CliError> {
    let report = lab::ellipse_sweep_with_center(
        &grid(c, &DEFAULT_ELLIPSE_EPS),
        c.center_ratio.unwrap_or(ELLIPSE_CENTER_RATIO),
        tol(c),
    )?;
    let mut out = Outcome::new(report.to_csv()?, &report, sweep_rows(&report))?;
    out.notes.push(format!(
        "product ratio last/first {:.4e}",
        report.summary["product_ratio_last_to_first"]
    ));
    Ok(out)
}

fn probe(c: &RunConfig) -> Result<Outcome, CliError> {
    let family: ProbeFamily = match c.family.as_slice() {
        [] => ProbeFamily::Spheroid,
        [one] => one.parse()?,
        _ => return Err(CliError::Config("probe takes a single --family".into())),
    };
    let report = lab::extremality_probe(family, c.k.unwrap_or(1), c.step.unwrap_or(DEFAULT_STEP))?;
    let rows = report
        .epsilons
        .iter()
        .map(|e| RowStatus {
            label: fmt_num(*e),
            converged: true,
        })
        .collect();
    let mut out = Outcome::new(report.to_csv()?, &report, rows)?;
    out.notes.push(format!(
        "D- = {:.6} ± {:.1e}, D+ = {:.6} ± {:.1e}, non-extremal witness: {}, zero within error: {}",
        report.left.value,
        report.left.error,
        report.right.value,
        report.right.error,
        report.non_extremal_witness,
        report.zero_within_error
    ));
    Ok(out)
}

fn mindex(c: &RunConfig) -> Result<Outcome, CliError> {
    let family: EscalationFamily = match c.family.as_slice() {
        [] => EscalationFamily::Product,
        [one] => one.parse()?,
        _ => return Err(CliError::Config("mindex takes a single --family".into())),
    };
    let report = lab::m_escalation(family, &grid(c, &[2.0, 5.0, 10.0]), c.threshold.unwrap_or(10))?;
    let mut out = Outcome::new(report.to_csv()?, &report, sweep_rows(&report))?;
    let first = report.summary["first_exceeding"];
    out.notes.push(if first.is_nan() {
        "threshold not exceeded".to_string()
    } else {
        format!("m(1) first exceeds the threshold at parameter {first}")
    });
    Ok(out)
}
