//! Verification reports: one record per check, operator and eigenvector
//! dumps, and deterministic text and JSON renderings.
//!
//! Every float is rounded to 12 significant digits when it enters a report
//! and negative zero is stored as zero, so JSON output round-trips exactly
//! and repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::linalg::{CMatrix, CVector, C64};

pub const REPORT_FORMAT: &str = "qrecon-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn word(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    pub detail: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub witness: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub tolerance: f64,
    pub fiducial_index: usize,
    pub max_order: usize,
    /// Every construction is deterministic; no random seeds are used.
    pub seeds: String,
}

/// `[re, im]`
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDump {
    pub name: String,
    pub source: String,
    pub matrix: Vec<Vec<ComplexPair>>,
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerEntry {
    pub label: String,
    pub eigenvalue: f64,
    pub rank: usize,
    pub eigenvector: Vec<ComplexPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerTable {
    pub source: String,
    pub variable: String,
    pub entries: Vec<AnswerEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub name: String,
    pub matrix: Vec<Vec<ComplexPair>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format: String,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    #[serde(default)]
    pub operators: Vec<OperatorDump>,
    #[serde(default)]
    pub answers: Vec<AnswerTable>,
    #[serde(default)]
    pub transitions: Vec<MatrixDump>,
}

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn num(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Fixed 12-significant-digit scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{:.11e}", num(x))
}

pub fn complex_pair(z: C64) -> ComplexPair {
    [num(z.re), num(z.im)]
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<ComplexPair>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex_pair(m[(i, j)])).collect()).collect()
}

pub fn vector_entries(v: &CVector) -> Vec<ComplexPair> {
    v.iter().map(|&z| complex_pair(z)).collect()
}

impl VerificationReport {
    pub fn new(environment: Environment) -> Self {
        Self {
            format: REPORT_FORMAT.to_string(),
            environment,
            checks: Vec::new(),
            operators: Vec::new(),
            answers: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn all_passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// 0 when every executed check passed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            2
        }
    }

    pub fn check(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite or absent");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let env = &self.environment;
        let _ = writeln!(out, "{}", self.format);
        let _ = writeln!(
            out,
            "tolerance {}  fiducial_index {}  max_order {}  seeds {}",
            fmt_num(env.tolerance),
            env.fiducial_index,
            env.max_order,
            env.seeds
        );
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let residual = c.residual.map_or_else(|| "-".to_string(), fmt_num);
            let _ =
                write!(out, "{} {:width$} [{}] residual={} {}", c.status.word(), c.id, c.anchor, residual, c.detail);
            for (k, v) in &c.witness {
                let _ = write!(out, " {k}={v}");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "summary: {} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped)
        );
        for op in &self.operators {
            let _ = writeln!(out, "operator {} ({})", op.name, op.source);
            write_matrix(&mut out, &op.matrix);
            let values: Vec<String> =
                op.eigenvalues.iter().zip(&op.multiplicities).map(|(&v, m)| format!("{} x{m}", fmt_num(v))).collect();
            let _ = writeln!(out, "  eigenvalues: {}", values.join(", "));
        }
        for table in &self.answers {
            let _ = writeln!(out, "answers {} ({})", table.variable, table.source);
            for e in &table.entries {
                let _ = writeln!(
                    out,
                    "  {}={} eigenvalue {} rank {} vector {}",
                    table.variable,
                    e.label,
                    fmt_num(e.eigenvalue),
                    e.rank,
                    fmt_row(&e.eigenvector)
                );
            }
        }
        for t in &self.transitions {
            let _ = writeln!(out, "transition {}", t.name);
            write_matrix(&mut out, &t.matrix);
        }
        out
    }
}

fn fmt_complex(z: &ComplexPair) -> String {
    format!("{}{}{}i", fmt_num(z[0]), if num(z[1]) < 0.0 { "" } else { "+" }, fmt_num(z[1]))
}

fn fmt_row(row: &[ComplexPair]) -> String {
    let cells: Vec<String> = row.iter().map(fmt_complex).collect();
    format!("[{}]", cells.join(", "))
}

fn write_matrix(out: &mut String, rows: &[Vec<ComplexPair>]) {
    for row in rows {
        let _ = writeln!(out, "  {}", fmt_row(row));
    }
}
