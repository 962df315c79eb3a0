//! Independent certificate checking and the JSON certificate file format.
//!
//! The checker trusts nothing from the producer: it recomputes stability,
//! the column total and every vertex's coverage with exact arithmetic.

use serde::{Deserialize, Serialize};

use num::Zero;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::interval::StableSetWeighting;
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub ok: bool,
    /// One line per violated constraint, first violation first.
    pub diagnostics: Vec<String>,
}

/// Accepts iff every column is stable in `g`, the column weights are positive
/// and sum to at most `ssw.total`, and every vertex is covered at least `w(v)`.
pub fn verify_certificate(g: &Graph, ssw: &StableSetWeighting, w: &[Q]) -> CertificateReport {
    let mut diagnostics = Vec::new();
    if w.len() != g.n() {
        diagnostics.push(format!(
            "weight vector has {} entries for {} vertices",
            w.len(),
            g.n()
        ));
    }
    for (s, wt) in &ssw.columns {
        if let Some(&v) = s.iter().find(|&&v| v >= g.n()) {
            diagnostics.push(format!("column {s:?} names vertex {v} outside the graph"));
        } else if !g.is_stable(s) {
            let (a, b) = first_edge(g, s);
            diagnostics.push(format!("non-stable column {s:?}: edge {a} {b}"));
        }
        if wt <= &Q::zero() {
            diagnostics.push(format!("column {s:?} has non-positive weight {wt}"));
        }
    }
    let sum = ssw.column_sum();
    if sum > ssw.total {
        diagnostics.push(format!(
            "column weights sum to {sum}, exceeding claimed total {}",
            ssw.total
        ));
    }
    let cov = ssw.coverage(g.n());
    for (v, (c, need)) in cov.iter().zip(w).enumerate() {
        if c < need {
            diagnostics.push(format!("undercovered vertex {v}: coverage {c} < {need}"));
        }
    }
    CertificateReport {
        ok: diagnostics.is_empty(),
        diagnostics,
    }
}

fn first_edge(g: &Graph, s: &[usize]) -> (usize, usize) {
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            if u == v || g.has_edge(u, v) {
                return (u, v);
            }
        }
    }
    unreachable!("called on a non-stable set")
}

/// On-disk certificate; rationals are strings `"p/q"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub n: usize,
    pub k: String,
    pub w: Vec<String>,
    pub columns: Vec<ColumnFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnFile {
    pub vertices: Vec<usize>,
    pub weight: String,
}

/// Parsed certificate: vertex count, target weights and the weighting.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub n: usize,
    pub w: Vec<Q>,
    pub weighting: StableSetWeighting,
}

impl Certificate {
    pub fn new(n: usize, w: Vec<Q>, weighting: StableSetWeighting) -> Self {
        Certificate { n, w, weighting }
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            n: self.n,
            k: fmt_q(&self.weighting.total),
            w: self.w.iter().map(fmt_q).collect(),
            columns: self
                .weighting
                .columns
                .iter()
                .map(|(s, wt)| ColumnFile {
                    vertices: s.clone(),
                    weight: fmt_q(wt),
                })
                .collect(),
        }
    }

    /// Keeps the columns exactly as written so the checker sees what the
    /// producer claimed (no merging of duplicates, no dropping of zeros).
    pub fn from_file(f: &CertificateFile) -> Result<Self> {
        if f.w.len() != f.n {
            return Err(Error::Parse(format!(
                "certificate declares n = {} but lists {} weights",
                f.n,
                f.w.len()
            )));
        }
        let w = f.w.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
        let columns = f
            .columns
            .iter()
            .map(|c| Ok((c.vertices.clone(), parse_q(&c.weight)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            n: f.n,
            w,
            weighting: StableSetWeighting {
                columns,
                total: parse_q(&f.k)?,
            },
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: CertificateFile = serde_json::from_str(text)?;
        Self::from_file(&f)
    }

    pub fn verify(&self, g: &Graph) -> CertificateReport {
        let mut report = verify_certificate(g, &self.weighting, &self.w);
        if self.n != g.n() {
            report.ok = false;
            report.diagnostics.insert(
                0,
                format!("certificate is for {} vertices, graph has {}", self.n, g.n()),
            );
        }
        report
    }
}
