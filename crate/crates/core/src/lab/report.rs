//! Report types and their CSV/JSON forms.
//!
//! CSV headers are fixed per report type; numbers are written with twelve
//! significant digits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geometry::AmbientTag;
use crate::{Error, Result};

/// Formats a number with twelve significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        x.to_string()
    }
}

fn parse_num(s: &str, column: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Schema(format!("column `{column}`: cannot parse `{s}` as a number")))
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let found: Vec<&str> = found.iter().collect();
    if found != expected {
        return Err(Error::Schema(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

fn write_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub profile: String,
    pub n: usize,
    pub k: usize,
    /// `λ_k^G · Vol^{2/n}`.
    pub normalized_eigenvalue: f64,
    pub bound: f64,
    /// `bound − normalized_eigenvalue`.
    pub margin: f64,
    /// The bound with the extra `(1/2)^{2/n}` volume factor.
    pub bound_literal: f64,
    pub envelope_pass: bool,
    pub envelope_max_violation: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedProfile {
    pub profile: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub ambient: AmbientTag,
    pub rows: Vec<BoundRow>,
    pub skipped: Vec<SkippedProfile>,
}

impl BoundReport {
    pub const HEADER: [&'static str; 9] = [
        "profile",
        "n",
        "k",
        "normalized_eigenvalue",
        "bound",
        "margin",
        "bound_literal",
        "envelope_pass",
        "envelope_max_violation",
    ];

    pub fn to_csv(&self) -> Result<String> {
        write_csv(
            &Self::HEADER,
            self.rows.iter().map(|r| {
                vec![
                    r.profile.clone(),
                    r.n.to_string(),
                    r.k.to_string(),
                    fmt_num(r.normalized_eigenvalue),
                    fmt_num(r.bound),
                    fmt_num(r.margin),
                    fmt_num(r.bound_literal),
                    r.envelope_pass.to_string(),
                    fmt_num(r.envelope_max_violation),
                ]
            }),
        )
    }

    /// Parses rows back from CSV, checking the header. Convergence flags
    /// live in the run manifest and read back as `true`.
    pub fn rows_from_csv(text: &str) -> Result<Vec<BoundRow>> {
        let mut rdr = reader(text);
        check_header(rdr.headers()?, &Self::HEADER)?;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let int = |i: usize| -> Result<usize> {
                rec[i]
                    .parse()
                    .map_err(|_| Error::Schema(format!("column `{}`: `{}` is not an integer", Self::HEADER[i], &rec[i])))
            };
            let num = |i: usize| parse_num(&rec[i], Self::HEADER[i]);
            rows.push(BoundRow {
                profile: rec[0].to_string(),
                n: int(1)?,
                k: int(2)?,
                normalized_eigenvalue: num(3)?,
                bound: num(4)?,
                margin: num(5)?,
                bound_literal: num(6)?,
                envelope_pass: rec[7]
                    .parse()
                    .map_err(|_| Error::Schema(format!("column `envelope_pass`: `{}`", &rec[7])))?,
                envelope_max_violation: num(8)?,
                converged: true,
            });
        }
        Ok(rows)
    }
}

/// Which experiment produced a sweep; fixes the auxiliary columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Extremal,
    Concentration,
    Torus,
    Ellipse,
    Escalation,
}

impl SweepKind {
    pub fn aux_columns(self) -> &'static [&'static str] {
        match self {
            SweepKind::Extremal => &["bound", "gap", "bound_literal"],
            SweepKind::Concentration => &["neumann_limit", "ratio_to_limit"],
            SweepKind::Torus => &["ratio_min", "ratio_max", "length_ratio_min", "length_ratio_max"],
            SweepKind::Ellipse => &["loop_length"],
            SweepKind::Escalation => &["m_index", "exceeds"],
        }
    }

    pub fn header(self) -> Vec<&'static str> {
        let mut h = vec!["parameter", "lambda", "volume", "product"];
        h.extend_from_slice(self.aux_columns());
        h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub lambda: f64,
    pub volume: f64,
    /// `lambda · volume^{2/n}`.
    pub product: f64,
    pub aux: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub kind: SweepKind,
    pub n: usize,
    pub rows: Vec<SweepRow>,
    /// Scalar findings such as fitted slopes or final gaps.
    pub summary: BTreeMap<String, f64>,
}

impl SweepReport {
    pub fn new(kind: SweepKind, n: usize, rows: Vec<SweepRow>) -> Self {
        SweepReport {
            kind,
            n,
            rows,
            summary: BTreeMap::new(),
        }
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.parameter).collect()
    }

    pub fn products(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.product).collect()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.lambda).collect()
    }

    /// Auxiliary column by name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.kind.aux_columns().iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.aux[i]).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        write_csv(
            &self.kind.header(),
            self.rows.iter().map(|r| {
                let mut v = vec![fmt_num(r.parameter), fmt_num(r.lambda), fmt_num(r.volume), fmt_num(r.product)];
                v.extend(r.aux.iter().map(|x| fmt_num(*x)));
                v
            }),
        )
    }

    pub fn rows_from_csv(kind: SweepKind, text: &str) -> Result<Vec<SweepRow>> {
        let header = kind.header();
        let mut rdr = reader(text);
        check_header(rdr.headers()?, &header)?;
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let vals = rec
                .iter()
                .zip(&header)
                .map(|(s, c)| parse_num(s, c))
                .collect::<Result<Vec<f64>>>()?;
            rows.push(SweepRow {
                parameter: vals[0],
                lambda: vals[1],
                volume: vals[2],
                product: vals[3],
                aux: vals[4..].to_vec(),
                converged: true,
            });
        }
        Ok(rows)
    }
}

/// One-sided derivative estimate with its step-halving error bar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeEstimate {
    pub value: f64,
    pub error: f64,
}

impl DerivativeEstimate {
    pub fn exceeds_error(&self) -> bool {
        self.value.abs() > self.error
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub family: String,
    pub k: usize,
    pub epsilons: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub step: f64,
    pub left: DerivativeEstimate,
    pub right: DerivativeEstimate,
    /// Product of the one-sided derivatives, present only when both exceed
    /// their error bars.
    pub product: Option<f64>,
    /// Both derivatives nonzero beyond error bars and of the same sign.
    pub non_extremal_witness: bool,
    /// Both derivatives zero within error bars.
    pub zero_within_error: bool,
}

impl ProbeReport {
    pub const HEADER: [&'static str; 2] = ["epsilon", "lambda"];

    pub fn to_csv(&self) -> Result<String> {
        write_csv(
            &Self::HEADER,
            self.epsilons
                .iter()
                .zip(&self.lambdas)
                .map(|(e, l)| vec![fmt_num(*e), fmt_num(*l)]),
        )
    }

    pub fn samples_from_csv(text: &str) -> Result<Vec<(f64, f64)>> {
        let mut rdr = reader(text);
        check_header(rdr.headers()?, &Self::HEADER)?;
        rdr.records()
            .map(|rec| {
                let rec = rec?;
                Ok((parse_num(&rec[0], "epsilon")?, parse_num(&rec[1], "lambda")?))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(36.336829071213025), "3.63368290712e1");
        assert_eq!(fmt_num(-1.0), "-1.00000000000e0");
        let back: f64 = fmt_num(std::f64::consts::PI).parse().unwrap();
        assert!((back - std::f64::consts::PI).abs() < 5e-12);
    }

    #[test]
    fn sweep_round_trip_and_schema() {
        let mut r = SweepReport::new(
            SweepKind::Torus,
            2,
            vec![SweepRow {
                parameter: 10.0,
                lambda: 0.999,
                volume: 394.78,
                product: 394.4,
                aux: vec![0.8, 1.2, 0.9, 1.1],
                converged: true,
            }],
        );
        r.summary.insert("x".into(), 1.0);
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("parameter,lambda,volume,product,ratio_min,ratio_max,length_ratio_min,length_ratio_max\n"));
        let rows = SweepReport::rows_from_csv(SweepKind::Torus, &csv).unwrap();
        assert_eq!(rows, r.rows);
        let err = SweepReport::rows_from_csv(SweepKind::Ellipse, &csv).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn bound_round_trip() {
        let rep = BoundReport {
            ambient: AmbientTag::Euclidean,
            rows: vec![BoundRow {
                profile: "glued:h=1e-3,n=2".into(),
                n: 2,
                k: 1,
                normalized_eigenvalue: 36.3,
                bound: 36.34,
                margin: 0.04,
                bound_literal: 18.17,
                envelope_pass: true,
                envelope_max_violation: -1e-4,
                converged: true,
            }],
            skipped: vec![],
        };
        let csv = rep.to_csv().unwrap();
        assert!(csv.contains("\"glued:h=1e-3,n=2\""));
        assert_eq!(BoundReport::rows_from_csv(&csv).unwrap(), rep.rows);
        assert!(BoundReport::rows_from_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn probe_samples_round_trip() {
        let est = DerivativeEstimate { value: 1.0, error: 0.1 };
        let rep = ProbeReport {
            family: "spheroid".into(),
            k: 1,
            epsilons: vec![-0.01, 0.0, 0.01],
            lambdas: vec![2.01, 2.0, 1.99],
            step: 0.01,
            left: est,
            right: est,
            product: Some(1.0),
            non_extremal_witness: true,
            zero_within_error: false,
        };
        let s = ProbeReport::samples_from_csv(&rep.to_csv().unwrap()).unwrap();
        assert_eq!(s, vec![(-0.01, 2.01), (0.0, 2.0), (0.01, 1.99)]);
    }
}
