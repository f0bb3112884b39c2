//! Conceptual variables as function tables on a finite space, contexts of
//! maximally accessible variables, permissibility and the induced group.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{generate_permutation_group, FiniteGroup, GroupAction, DEFAULT_ORDER_BOUND};
pub use crate::partition::Partition;

/// A function `phi -> value index` on `0..domain_size`, with a label per
/// attained value and optional numeric values (needed for operators).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptualVariable {
    name: String,
    values: Vec<usize>,
    value_labels: Vec<String>,
    numeric_values: Option<Vec<f64>>,
}

impl ConceptualVariable {
    pub fn new(name: impl Into<String>, values: Vec<usize>, value_labels: Vec<String>) -> Result<Self> {
        let name = name.into();
        let k = value_labels.len();
        if let Some(&v) = values.iter().find(|&&v| v >= k) {
            return Err(Error::InvalidArgument(format!("variable `{name}`: value index {v} but only {k} labels")));
        }
        let mut attained = vec![false; k];
        for &v in &values {
            attained[v] = true;
        }
        if let Some(v) = attained.iter().position(|a| !a) {
            return Err(Error::InvalidArgument(format!(
                "variable `{name}`: value `{}` is never attained",
                value_labels[v]
            )));
        }
        let mut sorted = value_labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("variable `{name}`: duplicate value labels")));
        }
        Ok(Self { name, values, value_labels, numeric_values: None })
    }

    pub fn with_numeric(mut self, numeric: Vec<f64>) -> Result<Self> {
        if numeric.len() != self.value_labels.len() {
            return Err(Error::InvalidArgument(format!(
                "variable `{}`: {} numeric values for {} value labels",
                self.name,
                numeric.len(),
                self.value_labels.len()
            )));
        }
        if numeric.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(format!("variable `{}`: non-finite value", self.name)));
        }
        self.numeric_values = Some(numeric);
        Ok(self)
    }

    /// Builds a variable from raw real values per point. Values within
    /// `tol` of each other (after sorting) share a level set; value
    /// indices follow ascending numeric order.
    pub fn from_numeric(name: impl Into<String>, raw: &[f64], tol: f64) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite value".into()));
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
        let mut reps: Vec<f64> = Vec::new();
        let mut values = vec![0; raw.len()];
        for &i in &order {
            match reps.last() {
                Some(&r) if (raw[i] - r).abs() <= tol => {}
                _ => reps.push(raw[i]),
            }
            values[i] = reps.len() - 1;
        }
        let reps: Vec<f64> = reps.into_iter().map(|r| if r.abs() <= tol { 0.0 } else { r }).collect();
        let mut labels: Vec<String> = reps.iter().map(|&r| numeric_label(r)).collect();
        for i in 1..labels.len() {
            if labels[..i].contains(&labels[i]) {
                labels[i] = format!("{}#{i}", labels[i]);
            }
        }
        Self::new(name, values, labels)?.with_numeric(reps)
    }

    /// Variable whose value index is `f(phi)`, relabelled to consecutive
    /// indices in order of first appearance.
    pub fn from_fn(name: impl Into<String>, m: usize, f: impl Fn(usize) -> usize) -> Self {
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        let mut labels = Vec::new();
        let values = (0..m)
            .map(|phi| {
                let raw = f(phi);
                *relabel.entry(raw).or_insert_with(|| {
                    labels.push(raw.to_string());
                    labels.len() - 1
                })
            })
            .collect();
        Self { name: name.into(), values, value_labels: labels, numeric_values: None }
    }

    pub fn constant(name: impl Into<String>, m: usize) -> Self {
        Self::from_fn(name, m, |_| 0)
    }

    pub fn identity(name: impl Into<String>, m: usize) -> Self {
        Self::from_fn(name, m, |phi| phi)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, phi: usize) -> usize {
        self.values[phi]
    }

    pub fn value_labels(&self) -> &[String] {
        &self.value_labels
    }

    pub fn label(&self, phi: usize) -> &str {
        &self.value_labels[self.values[phi]]
    }

    pub fn value_count(&self) -> usize {
        self.value_labels.len()
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn numeric_values(&self) -> Option<&[f64]> {
        self.numeric_values.as_deref()
    }

    /// Numeric value at a point, when numeric values are attached.
    pub fn numeric_at(&self, phi: usize) -> Option<f64> {
        self.numeric_values.as_ref().map(|n| n[self.values[phi]])
    }

    /// Smallest point taking value `v`.
    pub fn representative(&self, v: usize) -> usize {
        self.values.iter().position(|&x| x == v).expect("every value is attained")
    }

    pub fn induced_partition(&self) -> Partition {
        Partition::from_labels(&self.values)
    }

    /// `phi -> self(t(phi))` for a bijection `t` of the domain.
    pub fn compose(&self, t: &[usize], name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            values: t.iter().map(|&x| self.values[x]).collect(),
            value_labels: self.value_labels.clone(),
            numeric_values: self.numeric_values.clone(),
        }
    }

    /// `phi -> f(self(phi))`, where `f` maps value indices to value
    /// indices of `labels`. Unattained target values are dropped.
    pub fn coarsen(&self, f: &[usize], labels: &[String], name: impl Into<String>) -> Result<Self> {
        if f.len() != self.value_count() || f.iter().any(|&v| v >= labels.len()) {
            return Err(Error::InvalidArgument("coarsening map does not fit the value sets".into()));
        }
        let mut keep: Vec<usize> = f.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let values = self.values.iter().map(|&v| keep.binary_search(&f[v]).unwrap()).collect();
        let new_labels = keep.iter().map(|&v| labels[v].clone()).collect();
        Self::new(name, values, new_labels)
    }

    /// The joint variable `phi -> (self(phi), other(phi))`.
    pub fn joint(&self, other: &ConceptualVariable) -> Result<Self> {
        if self.domain_size() != other.domain_size() {
            return Err(Error::DimensionMismatch(self.domain_size(), other.domain_size()));
        }
        let name = format!("({},{})", self.name, other.name);
        let base =
            Self::from_fn(name, self.domain_size(), |phi| self.values[phi] * other.value_count() + other.values[phi]);
        let labels = (0..base.value_count())
            .map(|v| {
                let phi = base.representative(v);
                format!("({},{})", self.label(phi), other.label(phi))
            })
            .collect();
        Ok(Self { value_labels: labels, ..base })
    }
}

/// Shortest decimal label of a numeric value (integers without a point).
pub fn numeric_label(x: f64) -> String {
    if x == x.round() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        let s = format!("{:.12}", x);
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Outcome of a permissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Permissibility {
    Permissible,
    /// `theta(phi1) = theta(phi2)` but `theta(k phi1) != theta(k phi2)`.
    Violation {
        k: usize,
        phi1: usize,
        phi2: usize,
    },
}

impl Permissibility {
    pub fn holds(&self) -> bool {
        matches!(self, Permissibility::Permissible)
    }
}

/// Checks that every `k` maps level sets of `variable` into level sets.
/// The witness is the first violation in (k, phi1, phi2) order.
pub fn is_permissible(variable: &ConceptualVariable, k_action: &GroupAction) -> Result<Permissibility> {
    let m = variable.domain_size();
    if k_action.space_size() != m {
        return Err(Error::DimensionMismatch(k_action.space_size(), m));
    }
    let v = variable.values();
    for k in k_action.group().elements() {
        let perm = k_action.permutation(k);
        for phi1 in 0..m {
            for phi2 in phi1 + 1..m {
                if v[phi1] == v[phi2] && v[perm[phi1]] != v[perm[phi2]] {
                    return Ok(Permissibility::Violation { k, phi1, phi2 });
                }
            }
        }
    }
    Ok(Permissibility::Permissible)
}

/// The group `G` induced on a permissible variable's value set, its
/// action there, and the homomorphism `K -> G`.
#[derive(Debug, Clone)]
pub struct InducedGroup {
    pub group: Arc<FiniteGroup>,
    pub action: GroupAction,
    pub hom: Vec<usize>,
}

/// Each `k` yields the value map `v -> theta(k phi)` for any `phi` with
/// `theta(phi) = v`; `G` is the set of these maps.
pub fn induced_group(variable: &ConceptualVariable, k_action: &GroupAction) -> Result<InducedGroup> {
    if let Permissibility::Violation { k, phi1, phi2 } = is_permissible(variable, k_action)? {
        return Err(Error::NotPermissible { variable: variable.name().to_string(), k, phi1, phi2 });
    }
    let reps: Vec<usize> = (0..variable.value_count()).map(|v| variable.representative(v)).collect();
    let maps: Vec<Vec<usize>> = k_action
        .group()
        .elements()
        .map(|k| reps.iter().map(|&phi| variable.value(k_action.act(k, phi))).collect())
        .collect();
    let mut distinct: Vec<Vec<usize>> = Vec::new();
    for map in &maps {
        if !distinct.contains(map) {
            distinct.push(map.clone());
        }
    }
    let generated = generate_permutation_group(variable.value_count(), &distinct, DEFAULT_ORDER_BOUND)?;
    let hom = maps.iter().map(|map| generated.action.element_for(map).expect("induced maps lie in G")).collect();
    Ok(InducedGroup { group: generated.group, action: generated.action, hom })
}

/// A factorisation `theta = f o xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// `map[v]` is the theta value index for xi value index `v`.
    pub map: Vec<usize>,
    /// `f` is not one-to-one.
    pub strict: bool,
}

/// Returns `f` with `theta = f o xi` when xi's level sets refine theta's.
pub fn refines(xi: &ConceptualVariable, theta: &ConceptualVariable) -> Option<Refinement> {
    if xi.domain_size() != theta.domain_size() {
        return None;
    }
    let mut map = vec![usize::MAX; xi.value_count()];
    for phi in 0..xi.domain_size() {
        let slot = &mut map[xi.value(phi)];
        if *slot == usize::MAX {
            *slot = theta.value(phi);
        } else if *slot != theta.value(phi) {
            return None;
        }
    }
    let strict = xi.value_count() > theta.value_count();
    Some(Refinement { map, strict })
}

/// An accessibility context: the group `K` on the inaccessible space and
/// the declared family of maximally accessible variables.
#[derive(Debug, Clone)]
pub struct Context {
    k_action: GroupAction,
    family: Vec<ConceptualVariable>,
}

impl Context {
    pub fn new(k_action: GroupAction, family: Vec<ConceptualVariable>) -> Result<Self> {
        let m = k_action.space_size();
        if let Some(v) = family.iter().find(|v| v.domain_size() != m) {
            return Err(Error::InvalidArgument(format!(
                "variable `{}` has domain size {} but the context has {m} points",
                v.name(),
                v.domain_size()
            )));
        }
        Ok(Self { k_action, family })
    }

    pub fn phi_size(&self) -> usize {
        self.k_action.space_size()
    }

    pub fn k_action(&self) -> &GroupAction {
        &self.k_action
    }

    pub fn family(&self) -> &[ConceptualVariable] {
        &self.family
    }

    pub fn member(&self, name: &str) -> Option<&ConceptualVariable> {
        self.family.iter().find(|v| v.name() == name)
    }
}

/// Accessible means: a function of some declared maximal variable.
pub fn is_accessible(context: &Context, variable: &ConceptualVariable) -> bool {
    context.family().iter().any(|f| refines(f, variable).is_some())
}

/// Accessible, and no accessible variable strictly refines it.
pub fn is_maximally_accessible(context: &Context, variable: &ConceptualVariable) -> Result<bool> {
    if !is_accessible(context, variable) {
        return Err(Error::NotAccessible(variable.name().to_string()));
    }
    Ok(!context.family().iter().any(|f| refines(f, variable).is_some_and(|r| r.strict)))
}

/// True iff the joint variable of the two is not accessible.
pub fn are_complementary(theta1: &ConceptualVariable, theta2: &ConceptualVariable, context: &Context) -> bool {
    match theta1.joint(theta2) {
        Ok(joint) => !is_accessible(context, &joint),
        Err(_) => false,
    }
}

/// First point where `xi(phi) != theta(t phi)` (compared by value label).
pub fn relation_violation(theta: &ConceptualVariable, xi: &ConceptualVariable, t: &[usize]) -> Option<usize> {
    if theta.domain_size() != xi.domain_size() || t.len() != xi.domain_size() {
        return Some(0);
    }
    (0..xi.domain_size()).find(|&phi| xi.label(phi) != theta.label(t[phi]))
}

/// All `k` with `xi(phi) = theta(k phi)` for every `phi`.
pub fn find_relating_transformations(
    theta: &ConceptualVariable,
    xi: &ConceptualVariable,
    k_action: &GroupAction,
) -> Vec<usize> {
    if k_action.space_size() != theta.domain_size() {
        return Vec::new();
    }
    k_action.group().elements().filter(|&k| relation_violation(theta, xi, k_action.permutation(k)).is_none()).collect()
}
