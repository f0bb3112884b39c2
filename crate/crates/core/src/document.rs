//! JSON context documents: the inaccessible space, generators of `K`,
//! named transformations, variables, the declared maximal family, related
//! pairs and run options.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::DEFAULT_ORDER_BOUND;
use crate::repr::DEFAULT_TOLERANCE;
use crate::spin::parse_spin;
use crate::variables::{numeric_label, ConceptualVariable};

pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDocument {
    pub schema_version: String,
    pub phi_space: PhiSpace,
    #[serde(rename = "group_K")]
    pub group_k: GroupSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub transformations: BTreeMap<String, Vec<usize>>,
    #[serde(default)]
    pub variables: Vec<VariableSpec>,
    #[serde(default)]
    pub maximal_family: Vec<String>,
    #[serde(default)]
    pub pairs: Vec<PairSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiSpace {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Generators are referred to in words as `k0`, `k1`, ...
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub generators: Vec<Vec<usize>>,
}

/// `values[phi]` is a value index; `numeric_values` and `labels` are per
/// value index. Labels default to the numeric values, then to the index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableSpec {
    pub name: String,
    pub values: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// `k` is a word of generator or transformation names, multiplied left to
/// right as maps: `[a, b]` is `phi -> a(b(phi))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub theta: String,
    pub xi: String,
    pub k: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiducial_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
    /// Spin values such as `"1/2"` for the spin suite.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spin: Vec<String>,
    /// Circle discretisations for the in-plane permissibility check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stern_gerlach: Vec<usize>,
}

impl Options {
    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn fiducial_index(&self) -> usize {
        self.fiducial_index.unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.max_order.unwrap_or(DEFAULT_ORDER_BOUND)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema violations:\n  {}", .0.join("\n  "))]
    Schema(Vec<String>),
}

pub fn parse_context_str(text: &str) -> Result<ContextDocument, DocumentError> {
    let doc: ContextDocument = serde_json::from_str(text).map_err(|e| DocumentError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let violations = doc.violations();
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(DocumentError::Schema(violations))
    }
}

pub fn parse_context(path: &std::path::Path) -> Result<ContextDocument, DocumentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DocumentError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_context_str(&text)
}

fn permutation_problem(perm: &[usize], m: usize) -> Option<String> {
    if perm.len() != m {
        return Some(format!("has length {} but phi_space.size is {m}", perm.len()));
    }
    let mut seen = vec![false; m];
    for &x in perm {
        if x >= m {
            return Some(format!("maps to {x}, outside 0..{m}"));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Some(format!("repeats {x}"));
        }
    }
    None
}

fn duplicates<'a>(names: impl IntoIterator<Item = &'a String>) -> Vec<&'a String> {
    let mut seen = BTreeSet::new();
    names.into_iter().filter(|n| !seen.insert(*n)).collect()
}

impl ContextDocument {
    pub fn generator_name(i: usize) -> String {
        format!("k{i}")
    }

    /// Every schema violation, in document order.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = self.phi_space.size;
        if self.schema_version != SCHEMA_VERSION {
            out.push(format!("schema_version: expected \"{SCHEMA_VERSION}\", found \"{}\"", self.schema_version));
        }
        if m == 0 {
            out.push("phi_space.size: must be at least 1".into());
        }
        if let Some(labels) = &self.phi_space.labels {
            if labels.len() != m {
                out.push(format!("phi_space.labels: {} labels for {m} points", labels.len()));
            }
            for d in duplicates(labels) {
                out.push(format!("phi_space.labels: duplicate label `{d}`"));
            }
        }
        for (i, g) in self.group_k.generators.iter().enumerate() {
            if let Some(p) = permutation_problem(g, m) {
                out.push(format!("group_K.generators[{i}]: {p}"));
            }
        }
        let generator_names: BTreeSet<String> = (0..self.group_k.generators.len()).map(Self::generator_name).collect();
        for (name, perm) in &self.transformations {
            if generator_names.contains(name) {
                out.push(format!("transformations.{name}: name clashes with a generator of K"));
            }
            if let Some(p) = permutation_problem(perm, m) {
                out.push(format!("transformations.{name}: {p}"));
            }
        }
        for d in duplicates(self.variables.iter().map(|v| &v.name)) {
            out.push(format!("variables: duplicate name `{d}`"));
        }
        for (i, v) in self.variables.iter().enumerate() {
            out.extend(variable_violations(v, m).into_iter().map(|p| format!("variables[{i}] `{}`: {p}", v.name)));
        }
        let defined: BTreeSet<&String> = self.variables.iter().map(|v| &v.name).collect();
        for name in &self.maximal_family {
            if !defined.contains(name) {
                out.push(format!("maximal_family: undefined variable `{name}`"));
            }
        }
        for d in duplicates(&self.maximal_family) {
            out.push(format!("maximal_family: duplicate name `{d}`"));
        }
        for (i, pair) in self.pairs.iter().enumerate() {
            for (field, name) in [("theta", &pair.theta), ("xi", &pair.xi)] {
                if !defined.contains(name) {
                    out.push(format!("pairs[{i}].{field}: undefined variable `{name}`"));
                }
            }
            for token in &pair.k {
                if !generator_names.contains(token) && !self.transformations.contains_key(token) {
                    out.push(format!("pairs[{i}].k: unknown transformation `{token}`"));
                }
            }
        }
        let o = &self.options;
        if let Some(t) = o.tolerance {
            if !(t.is_finite() && t > 0.0 && t < 1.0) {
                out.push(format!("options.tolerance: {t} is not in (0, 1)"));
            }
        }
        if o.max_order == Some(0) {
            out.push("options.max_order: must be positive".into());
        }
        for s in &o.spin {
            if let Err(e) = parse_spin(s) {
                out.push(format!("options.spin: {e}"));
            }
        }
        for &n in &o.stern_gerlach {
            if !(3..=360).contains(&n) {
                out.push(format!("options.stern_gerlach: {n} is not in 3..=360"));
            }
        }
        out
    }

    /// Permutation of a generator or named transformation.
    pub fn transformation(&self, token: &str) -> Option<Vec<usize>> {
        if let Some(perm) = self.transformations.get(token) {
            return Some(perm.clone());
        }
        let i: usize = token.strip_prefix('k')?.parse().ok()?;
        if Self::generator_name(i) != token {
            return None;
        }
        self.group_k.generators.get(i).cloned()
    }

    /// Product of a word as a map of `0..size`.
    pub fn resolve_word(&self, word: &[String]) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = (0..self.phi_space.size).collect();
        for token in word.iter().rev() {
            let t = self.transformation(token)?;
            out = out.iter().map(|&x| t[x]).collect();
        }
        Some(out)
    }

    pub fn variable(&self, name: &str) -> Option<&VariableSpec> {
        self.variables.iter().find(|v| v.name == name)
    }
}

fn variable_violations(v: &VariableSpec, m: usize) -> Vec<String> {
    let mut out = Vec::new();
    if v.name.is_empty() {
        out.push("empty name".into());
    }
    if v.values.len() != m {
        out.push(format!("{} values for {m} points", v.values.len()));
    }
    let count = v.values.iter().max().map_or(0, |&x| x + 1);
    let attained: BTreeSet<usize> = v.values.iter().copied().collect();
    if let Some(missing) = (0..count).find(|i| !attained.contains(i)) {
        out.push(format!("value index {missing} is never attained"));
    }
    if let Some(numeric) = &v.numeric_values {
        if numeric.len() != count {
            out.push(format!("{} numeric values for {count} value indices", numeric.len()));
        }
        if numeric.iter().any(|x| !x.is_finite()) {
            out.push("numeric value is not finite".into());
        }
    }
    if let Some(labels) = &v.labels {
        if labels.len() != count {
            out.push(format!("{} labels for {count} value indices", labels.len()));
        }
        for d in duplicates(labels) {
            out.push(format!("duplicate label `{d}`"));
        }
    } else if let Some(numeric) = &v.numeric_values {
        let labels: Vec<String> = numeric.iter().map(|&x| numeric_label(x)).collect();
        for d in duplicates(&labels) {
            out.push(format!("numeric values give duplicate label `{d}`; supply labels"));
        }
    }
    out
}

impl VariableSpec {
    /// The variable this entry describes; assumes the entry has no schema
    /// violations.
    pub fn build(&self) -> crate::Result<ConceptualVariable> {
        let count = self.values.iter().max().map_or(0, |&x| x + 1);
        let labels = match (&self.labels, &self.numeric_values) {
            (Some(l), _) => l.clone(),
            (None, Some(n)) => n.iter().map(|&x| numeric_label(x)).collect(),
            (None, None) => (0..count).map(|i| i.to_string()).collect(),
        };
        let v = ConceptualVariable::new(self.name.clone(), self.values.clone(), labels)?;
        match &self.numeric_values {
            Some(n) => v.with_numeric(n.clone()),
            None => Ok(v),
        }
    }
}
