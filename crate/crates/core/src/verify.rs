//! Runs every construction and check for a context document and collects
//! the outcomes in a [`VerificationReport`]. A failed construction records
//! its dependents as skipped instead of aborting the run.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::coherent::{
    build_coherent_system, one_to_one_check, operator_from_variable, resolution_of_identity, OneToOne,
};
use crate::document::ContextDocument;
use crate::error::Error;
use crate::group::{generate_permutation_group, FiniteGroup, GeneratedGroup, GroupAction};
use crate::linalg::{basis_vector, identity, max_diff, unitarity_residual, CVector};
use crate::pairing::{
    build_j, build_joint_group, build_related_pair, build_w, joint_coset_analysis, joint_frame, joint_operators,
    pair_operators, transport_element, verify_joint_irreducible, JointFrame, JointSystem, RelatedPair,
};
use crate::report::{
    matrix_rows, num, vector_entries, AnswerEntry, AnswerTable, CheckRecord, Environment, MatrixDump, OperatorDump,
    Status, VerificationReport,
};
use crate::repr::{permutation_representation, Operator};
use crate::spectra::{
    eigenspace_labels, eigensystem, question_answer_labels, transition_matrix, verify_covariance_joint,
    verify_maximality_iff_nondegenerate, verify_values_are_eigenvalues, EigenSystem,
};
use crate::spin::{
    build_spin, full_rotation_counterexample, in_plane_permissibility, parse_spin, rotation_operator,
    verify_commutation, verify_eigen,
};
use crate::variables::{
    induced_group, is_accessible, is_maximally_accessible, is_permissible, refines, ConceptualVariable, Context,
    InducedGroup, Permissibility,
};

/// Tolerance for the exact spin identities.
pub const SPIN_TOLERANCE: f64 = 1e-12;
/// Tolerance for `exp(2 pi i A_z) = (-1)^{2r}`.
pub const FULL_TURN_TOLERANCE: f64 = 1e-10;

pub mod anchor {
    pub const AXIOMS: &str = "group-action axioms";
    pub const ORBIT_STABILIZER: &str = "orbit-stabilizer";
    pub const PERMISSIBLE: &str = "def:permissible";
    pub const INDUCED: &str = "induced-group";
    pub const MAXIMAL: &str = "def:maximal";
    pub const RELATED: &str = "related-pair";
    pub const JOINT_GROUP: &str = "joint-group";
    pub const JOINT_REP: &str = "joint-representation";
    pub const JOINT_IRREDUCIBLE: &str = "lemma:joint-irreducible";
    pub const RESOLUTION: &str = "joint-resolution";
    pub const JOINT_LABELS: &str = "lemma:joint-labels";
    pub const OPERATORS: &str = "joint-operators";
    pub const UNIT: &str = "unit-variable";
    pub const COVARIANCE: &str = "thm:conjugation-covariance";
    pub const EIGENVALUES: &str = "prop:values-are-eigenvalues";
    pub const NONDEGENERATE: &str = "prop:maximal-iff-nondegenerate";
    pub const ANSWERS: &str = "prop:question-answer";
    pub const TRANSITION: &str = "basis-change";
    pub const COHERENT: &str = "coherent-resolution";
    pub const ONE_TO_ONE: &str = "coherent-one-to-one";
    pub const SPIN_COMMUTATION: &str = "spin:commutation";
    pub const SPIN_EIGEN: &str = "spin:eigen";
    pub const SPIN_DIM: &str = "spin:dimension";
    pub const SPIN_TURN: &str = "spin:full-turn";
    pub const IN_PLANE: &str = "prop:in-plane-permissible";
    pub const FULL_ROTATION: &str = "full-rotation-counterexample";
}

/// Run parameters: the document's options, possibly overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tolerance: f64,
    pub fiducial_index: usize,
    pub max_order: usize,
}

impl Settings {
    pub fn from_document(doc: &ContextDocument) -> Self {
        Self {
            tolerance: doc.options.tolerance(),
            fiducial_index: doc.options.fiducial_index(),
            max_order: doc.options.max_order(),
        }
    }
}

/// What to run beyond the group and variable checks.
#[derive(Debug, Clone, PartialEq)]
pub enum Scope {
    All,
    Pair(usize),
    Variable(String),
    /// Only the spin suite from the document options.
    Spin,
}

struct Run<'a> {
    doc: &'a ContextDocument,
    s: Settings,
    report: VerificationReport,
}

/// The pieces built for a pair that later checks reuse.
struct PairState {
    pair: RelatedPair,
    joint: JointSystem,
    frame: JointFrame,
    psi0: CVector,
}

fn witness(items: &[(&str, Value)]) -> BTreeMap<String, Value> {
    items.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

impl Run<'_> {
    fn push(
        &mut self,
        id: String,
        anchor: &str,
        status: Status,
        residual: Option<f64>,
        detail: String,
        w: &[(&str, Value)],
    ) {
        let (residual, detail) = match residual {
            Some(r) if !r.is_finite() => (None, format!("{detail} (residual not finite)")),
            r => (r.map(num), detail),
        };
        self.report.checks.push(CheckRecord {
            id,
            anchor: anchor.to_string(),
            status,
            residual,
            detail,
            witness: witness(w),
        });
    }

    fn pass_if(
        &mut self,
        id: String,
        anchor: &str,
        ok: bool,
        residual: Option<f64>,
        detail: String,
        w: &[(&str, Value)],
    ) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(id, anchor, status, residual, detail, w);
    }

    fn skip(&mut self, ids: &[(String, &str)], reason: &str) {
        for (id, anchor) in ids {
            self.push(id.clone(), anchor, Status::Skipped, None, reason.to_string(), &[]);
        }
    }

    fn word_label(k: &GeneratedGroup, e: usize) -> String {
        if k.words[e].is_empty() {
            "e".into()
        } else {
            k.words[e].iter().map(|&s| ContextDocument::generator_name(s)).collect::<Vec<_>>().join("*")
        }
    }

    fn point_label(&self, phi: usize) -> Value {
        match &self.doc.phi_space.labels {
            Some(labels) => json!(labels[phi]),
            None => json!(phi),
        }
    }

    fn dump_operator(&mut self, op: &Operator, eig: &EigenSystem, source: &str) {
        self.report.operators.push(OperatorDump {
            name: op.source_variable.clone(),
            source: source.to_string(),
            matrix: matrix_rows(&op.matrix),
            eigenvalues: eig.eigenvalues.iter().map(|&v| num(v)).collect(),
            multiplicities: eig.multiplicities.clone(),
        });
    }

    fn group_checks(&mut self) -> Option<GeneratedGroup> {
        let m = self.doc.phi_space.size;
        let k = match generate_permutation_group(m, &self.doc.group_k.generators, self.s.max_order) {
            Ok(k) => k,
            Err(e) => {
                self.push("group.axioms".into(), anchor::AXIOMS, Status::Fail, None, e.to_string(), &[]);
                return None;
            }
        };
        let table = k.group.cayley();
        let rebuilt = FiniteGroup::from_cayley(&table).and_then(|g| {
            let perms: Vec<Vec<usize>> = k.group.elements().map(|e| k.action.permutation(e).to_vec()).collect();
            GroupAction::new(Arc::new(g), &perms)
        });
        match rebuilt {
            Ok(_) => self.push(
                "group.axioms".into(),
                anchor::AXIOMS,
                Status::Pass,
                None,
                format!("K has order {} acting on {m} points", k.group.order()),
                &[],
            ),
            Err(e) => {
                self.push("group.axioms".into(), anchor::AXIOMS, Status::Fail, None, e.to_string(), &[]);
                return None;
            }
        }
        let bad = (0..m).find(|&x| k.action.orbit(x).len() * k.action.isotropy_subgroup(x).order() != k.group.order());
        let orbits = k.action.orbits().len();
        self.pass_if(
            "group.orbit_stabilizer".into(),
            anchor::ORBIT_STABILIZER,
            bad.is_none(),
            None,
            format!("{orbits} orbit(s)"),
            &bad.map(|x| vec![("point", json!(x))]).unwrap_or_default(),
        );
        Some(k)
    }

    fn variable_checks(
        &mut self,
        k: &GeneratedGroup,
        variables: &[ConceptualVariable],
        context: &Context,
    ) -> BTreeMap<String, InducedGroup> {
        let mut induced = BTreeMap::new();
        for v in variables {
            let name = v.name();
            let permissible = is_permissible(v, &k.action).expect("sizes validated");
            match permissible {
                Permissibility::Permissible => self.push(
                    format!("permissible[{name}]"),
                    anchor::PERMISSIBLE,
                    Status::Pass,
                    None,
                    "level sets respected".into(),
                    &[],
                ),
                Permissibility::Violation { k: e, phi1, phi2 } => {
                    let w = [
                        ("k", json!(e)),
                        ("k_word", json!(Self::word_label(k, e))),
                        ("phi1", self.point_label(phi1)),
                        ("phi2", self.point_label(phi2)),
                    ];
                    self.push(
                        format!("permissible[{name}]"),
                        anchor::PERMISSIBLE,
                        Status::Fail,
                        None,
                        format!("{name}(phi1) = {name}(phi2) but {name}(k phi1) != {name}(k phi2)"),
                        &w,
                    );
                }
            }
            let id = format!("induced_group[{name}]");
            if !permissible.holds() {
                self.skip(&[(id, anchor::INDUCED)], "variable is not permissible");
            } else {
                match induced_group(v, &k.action) {
                    Ok(g) => {
                        let hom_ok = crate::group::verify_homomorphism(&g.hom, &k.group, &g.group);
                        let transitive = g.action.is_transitive();
                        let free = g.action.nontrivial_isotropy_point().is_none();
                        self.pass_if(
                            id,
                            anchor::INDUCED,
                            hom_ok,
                            None,
                            format!(
                                "G has order {} on {} values, transitive {transitive}, free {free}",
                                g.group.order(),
                                v.value_count()
                            ),
                            &[],
                        );
                        induced.insert(name.to_string(), g);
                    }
                    Err(e) => self.push(id, anchor::INDUCED, Status::Fail, None, e.to_string(), &[]),
                }
            }
            let in_family = self.doc.maximal_family.iter().any(|f| f == name);
            let id = format!("maximal[{name}]");
            match is_maximally_accessible(context, v) {
                Ok(true) => self.push(id, anchor::MAXIMAL, Status::Pass, None, "maximally accessible".into(), &[]),
                Ok(false) => {
                    let finer = context
                        .family()
                        .iter()
                        .find(|f| refines(f, v).is_some_and(|r| r.strict))
                        .map(|f| f.name().to_string())
                        .unwrap_or_default();
                    self.pass_if(
                        id,
                        anchor::MAXIMAL,
                        !in_family,
                        None,
                        format!("accessible, strictly refined by `{finer}`"),
                        &[("refined_by", json!(finer))],
                    );
                }
                Err(_) => {
                    debug_assert!(!is_accessible(context, v));
                    self.pass_if(id, anchor::MAXIMAL, !in_family, None, "not accessible".into(), &[]);
                }
            }
        }
        induced
    }

    fn pair_ids(i: usize) -> Vec<(String, &'static str)> {
        let p = |s: &str| format!("pair[{i}].{s}");
        vec![
            (p("joint_group"), anchor::JOINT_GROUP),
            (p("W"), anchor::JOINT_REP),
            (p("joint_irreducible"), anchor::JOINT_IRREDUCIBLE),
            (p("resolution"), anchor::RESOLUTION),
            (p("joint_labels"), anchor::JOINT_LABELS),
            (p("operators"), anchor::OPERATORS),
            (p("unit_operator"), anchor::UNIT),
            (p("covariance"), anchor::COVARIANCE),
            (p("covariance_k"), anchor::COVARIANCE),
            (p("eigenvalues[theta]"), anchor::EIGENVALUES),
            (p("eigenvalues[xi]"), anchor::EIGENVALUES),
            (p("nondegenerate[theta]"), anchor::NONDEGENERATE),
            (p("nondegenerate[xi]"), anchor::NONDEGENERATE),
            (p("answers[theta]"), anchor::ANSWERS),
            (p("answers[xi]"), anchor::ANSWERS),
            (p("transition"), anchor::TRANSITION),
        ]
    }

    /// Skips every id of `pair_ids` from position `from` on.
    fn skip_rest(&mut self, i: usize, from: &str, reason: &str) {
        let ids = Self::pair_ids(i);
        let start = ids.iter().position(|(id, _)| id.ends_with(&format!(".{from}"))).unwrap_or(0);
        self.skip(&ids[start..], reason);
    }

    fn pair_checks(
        &mut self,
        i: usize,
        k: &GeneratedGroup,
        variables: &[ConceptualVariable],
        context: &Context,
        induced: &BTreeMap<String, InducedGroup>,
    ) {
        let decl = &self.doc.pairs[i];
        let find = |n: &str| variables.iter().find(|v| v.name() == n).expect("names validated");
        let (theta, xi) = (find(&decl.theta), find(&decl.xi));
        let k_perm = self.doc.resolve_word(&decl.k).expect("words validated");
        let id = format!("pair[{i}].related");
        let pair = match build_related_pair(context, theta, xi, &k_perm) {
            Ok(p) => {
                self.push(
                    id,
                    anchor::RELATED,
                    Status::Pass,
                    None,
                    format!(
                        "xi = theta o k; k^2 = e: {}; phi = (theta, xi): {}; k in K: {}",
                        p.k_squared_identity,
                        p.product_structure,
                        p.k_element.is_some()
                    ),
                    &[],
                );
                p
            }
            Err(e) => {
                let w = match &e {
                    Error::NotRelated { phi } => vec![("phi", self.point_label(*phi))],
                    _ => vec![],
                };
                self.push(id, anchor::RELATED, Status::Fail, None, e.to_string(), &w);
                self.skip_rest(i, "joint_group", "pair is not related");
                return;
            }
        };
        let Some(g) = induced.get(theta.name()) else {
            self.push(
                format!("pair[{i}].joint_group"),
                anchor::JOINT_GROUP,
                Status::Fail,
                None,
                "theta has no induced group".into(),
                &[],
            );
            self.skip_rest(i, "W", "joint group unavailable");
            return;
        };
        let group = match build_joint_group(g, self.s.max_order) {
            Ok(n) => {
                let side = n.side;
                let transitive = n.generated.action.is_transitive();
                let nonabelian = side <= 1 || !n.group().is_abelian();
                self.pass_if(
                    format!("pair[{i}].joint_group"),
                    anchor::JOINT_GROUP,
                    transitive && nonabelian,
                    None,
                    format!(
                        "N has order {} on {} points, transitive {transitive}, non-abelian {}",
                        n.group().order(),
                        side * side,
                        !n.group().is_abelian()
                    ),
                    &[],
                );
                n
            }
            Err(e) => {
                self.push(
                    format!("pair[{i}].joint_group"),
                    anchor::JOINT_GROUP,
                    Status::Fail,
                    None,
                    e.to_string(),
                    &[],
                );
                self.skip_rest(i, "W", "joint group unavailable");
                return;
            }
        };
        let u = permutation_representation(&g.action).with_tolerance(self.s.tolerance);
        let joint = match build_j(&u).and_then(|j| build_w(&group, &u, &j)) {
            Ok(joint) => {
                let d = joint.dim();
                let involution = max_diff(&(&joint.j_matrix * &joint.j_matrix), &identity(d));
                let residual = joint.relation_residual.max(involution);
                self.pass_if(
                    format!("pair[{i}].W"),
                    anchor::JOINT_REP,
                    residual <= self.s.tolerance,
                    Some(residual),
                    format!("W well defined on N, dimension {d}; J^2 = I and W(jgj) = J U(g) J"),
                    &[],
                );
                joint
            }
            Err(e) => {
                let w = match &e {
                    Error::NotWellDefined { element, word_a, word_b, .. } => {
                        vec![("element", json!(element)), ("word_a", json!(word_a)), ("word_b", json!(word_b))]
                    }
                    _ => vec![],
                };
                self.push(format!("pair[{i}].W"), anchor::JOINT_REP, Status::Fail, None, e.to_string(), &w);
                self.skip_rest(i, "joint_irreducible", "W unavailable");
                return;
            }
        };
        let irreducible = verify_joint_irreducible(&joint);
        self.pass_if(
            format!("pair[{i}].joint_irreducible"),
            anchor::JOINT_IRREDUCIBLE,
            irreducible.holds,
            None,
            format!("commutant dimension {}", irreducible.commutant_dimension),
            &[("commutant_dimension", json!(irreducible.commutant_dimension))],
        );
        let d = joint.dim();
        if self.s.fiducial_index >= d {
            self.push(
                format!("pair[{i}].resolution"),
                anchor::RESOLUTION,
                Status::Fail,
                None,
                format!("fiducial index {} out of range for dimension {d}", self.s.fiducial_index),
                &[],
            );
            self.skip_rest(i, "joint_labels", "no fiducial");
            return;
        }
        let psi0 = basis_vector(d, self.s.fiducial_index);
        let frame = match joint_frame(&joint, &psi0) {
            Ok(f) => {
                self.push(
                    format!("pair[{i}].resolution"),
                    anchor::RESOLUTION,
                    Status::Pass,
                    Some(f.resolution_residual),
                    format!("c = {}", crate::report::fmt_num(f.weight)),
                    &[],
                );
                f
            }
            Err(e) => {
                let residual = match e {
                    Error::NoResolution { residual } => Some(residual),
                    _ => None,
                };
                self.push(
                    format!("pair[{i}].resolution"),
                    anchor::RESOLUTION,
                    Status::Fail,
                    residual,
                    e.to_string(),
                    &[],
                );
                self.skip_rest(i, "joint_labels", "resolution of the identity fails");
                return;
            }
        };
        match joint_coset_analysis(&joint, &psi0) {
            Ok(c) => {
                let w = match c.witness {
                    Some((z1, z2, x, y)) if z1 == z2 => {
                        vec![
                            ("kind", json!("coset with mixed labels")),
                            ("z", json!(z1)),
                            ("x", json!(x)),
                            ("y", json!(y)),
                        ]
                    }
                    Some((z1, z2, x, y)) => vec![
                        ("kind", json!("shared label")),
                        ("z1", json!(z1)),
                        ("z2", json!(z2)),
                        ("x", json!(x)),
                        ("y", json!(y)),
                    ],
                    None => vec![],
                };
                let side = joint.group.side;
                self.pass_if(
                    format!("pair[{i}].joint_labels"),
                    anchor::JOINT_LABELS,
                    c.holds(),
                    None,
                    format!(
                        "|M| = {}, |Z| = {} for {} points (x, y); consistent {}, injective {}",
                        c.system.isotropy().order(),
                        c.x_index.len(),
                        side * side,
                        c.consistent,
                        c.injective
                    ),
                    &w,
                );
            }
            Err(e) => self.push(
                format!("pair[{i}].joint_labels"),
                anchor::JOINT_LABELS,
                Status::Fail,
                None,
                e.to_string(),
                &[],
            ),
        }
        let state = PairState { pair, joint, frame, psi0 };
        self.operator_checks(i, &state, k, context);
    }

    fn operator_checks(&mut self, i: usize, st: &PairState, k: &GeneratedGroup, context: &Context) {
        let tol = self.s.tolerance;
        let ops = match pair_operators(&st.pair, &st.joint, &st.psi0) {
            Ok(ops) => ops,
            Err(e) => {
                self.push(format!("pair[{i}].operators"), anchor::OPERATORS, Status::Fail, None, e.to_string(), &[]);
                self.skip_rest(i, "unit_operator", "operators unavailable");
                return;
            }
        };
        let marginal = ops.marginal_residual();
        self.pass_if(
            format!("pair[{i}].operators"),
            anchor::OPERATORS,
            ops.a_theta.hermitian && ops.a_xi.hermitian && marginal <= tol,
            Some(marginal),
            format!(
                "hermitian ({}, {}); sum P = sum Q = I; |[A_theta, A_xi]| = {}",
                ops.a_theta.hermitian,
                ops.a_xi.hermitian,
                crate::report::fmt_num(ops.commutator_norm())
            ),
            &[],
        );
        let side = st.joint.group.side;
        let unit = joint_operators(&st.joint, &st.psi0, &vec![1.0; side], &vec![0.0; side])
            .map(|u| max_diff(&u.a_theta.matrix, &identity(st.joint.dim())));
        match unit {
            Ok(r) => self.pass_if(
                format!("pair[{i}].unit_operator"),
                anchor::UNIT,
                r <= tol,
                Some(r),
                "theta = 1 gives I".into(),
                &[],
            ),
            Err(e) => {
                self.push(format!("pair[{i}].unit_operator"), anchor::UNIT, Status::Fail, None, e.to_string(), &[])
            }
        }

        let f_theta: Vec<f64> = (0..side * side).map(|p| st.pair.theta.numeric_values().unwrap()[p / side]).collect();
        let mut worst = 0.0f64;
        let mut failure: Option<(usize, String)> = None;
        for t in k.group.elements() {
            match verify_covariance_joint(&st.pair, &st.joint, &st.frame, &f_theta, k.action.permutation(t)) {
                Ok(c) => {
                    worst = worst.max(c.residual);
                    if !c.holds && failure.is_none() {
                        failure = Some((t, "residual above tolerance".into()));
                    }
                }
                Err(e) => {
                    failure.get_or_insert((t, e.to_string()));
                }
            }
        }
        let w = failure
            .as_ref()
            .map(|(t, why)| vec![("t", json!(t)), ("t_word", json!(Self::word_label(k, *t))), ("reason", json!(why))])
            .unwrap_or_default();
        self.pass_if(
            format!("pair[{i}].covariance"),
            anchor::COVARIANCE,
            failure.is_none(),
            Some(worst),
            format!("W(t)^+ A W(t) = A of theta o t for all {} elements t of K", k.group.order()),
            &w,
        );
        match transport_element(&st.pair, &st.joint, &st.pair.k) {
            Ok(n) => {
                let w = st.joint.w.matrix(n);
                let r = max_diff(&(w.adjoint() * &ops.a_theta.matrix * w), &ops.a_xi.matrix);
                self.pass_if(
                    format!("pair[{i}].covariance_k"),
                    anchor::COVARIANCE,
                    r <= tol,
                    Some(r),
                    "W(k)^+ A_theta W(k) = A_xi".into(),
                    &[],
                )
            }
            Err(e) => {
                self.push(format!("pair[{i}].covariance_k"), anchor::COVARIANCE, Status::Fail, None, e.to_string(), &[])
            }
        }

        let source = format!("pair[{i}]");
        let mut eigs = Vec::new();
        for (role, op, var) in [("theta", &ops.a_theta, &st.pair.theta), ("xi", &ops.a_xi, &st.pair.xi)] {
            match eigensystem(op, tol) {
                Ok(eig) => {
                    self.dump_operator(op, &eig, &source);
                    self.spectral_checks(i, role, var, &eig, context, &source);
                    eigs.push(Some(eig));
                }
                Err(e) => {
                    for prefix in ["eigenvalues", "nondegenerate", "answers"] {
                        let id = format!("pair[{i}].{prefix}[{role}]");
                        self.push(id, anchor::EIGENVALUES, Status::Fail, None, e.to_string(), &[]);
                    }
                    eigs.push(None);
                }
            }
        }
        let id = format!("pair[{i}].transition");
        match (&eigs[0], &eigs[1]) {
            (Some(a), Some(b)) => match transition_matrix(a, b) {
                Ok(t) => {
                    let r = unitarity_residual(&t);
                    let d = t.nrows() as f64;
                    let spread = t.iter().map(|z| (z.norm_sqr() - 1.0 / d).abs()).fold(0.0, f64::max);
                    self.pass_if(
                        id,
                        anchor::TRANSITION,
                        r <= tol,
                        Some(r),
                        format!("unitary; max ||T_ij|^2 - 1/d| = {}", crate::report::fmt_num(spread)),
                        &[],
                    );
                    self.report
                        .transitions
                        .push(MatrixDump { name: format!("{source} theta->xi"), matrix: matrix_rows(&t) });
                }
                Err(e) => self.push(id, anchor::TRANSITION, Status::Fail, None, e.to_string(), &[]),
            },
            _ => self.skip(&[(id, anchor::TRANSITION)], "eigensystem unavailable"),
        }
    }

    fn spectral_checks(
        &mut self,
        i: usize,
        role: &str,
        var: &ConceptualVariable,
        eig: &EigenSystem,
        context: &Context,
        source: &str,
    ) {
        let values = var.numeric_values().expect("operators need numeric values");
        let check = verify_values_are_eigenvalues(eig, values);
        let fmt = |v: &[f64]| v.iter().map(|&x| crate::report::fmt_num(x)).collect::<Vec<_>>().join(", ");
        self.pass_if(
            format!("pair[{i}].eigenvalues[{role}]"),
            anchor::EIGENVALUES,
            check.holds,
            None,
            format!("eigenvalues {{{}}} vs values {{{}}}", fmt(&check.eigenvalues), fmt(&check.values)),
            &[],
        );
        let m = verify_maximality_iff_nondegenerate(context, var, eig);
        self.pass_if(
            format!("pair[{i}].nondegenerate[{role}]"),
            anchor::NONDEGENERATE,
            m.holds,
            None,
            format!("maximal {}, non-degenerate {}", m.maximal, m.nondegenerate),
            &[],
        );
        let id = format!("pair[{i}].answers[{role}]");
        let labels = eigenspace_labels(eig, var);
        let entries = labels
            .iter()
            .map(|l| AnswerEntry {
                label: l.value_label.clone(),
                eigenvalue: num(l.eigenvalue),
                rank: l.rank,
                eigenvector: vector_entries(&l.basis[0]),
            })
            .collect();
        self.report.answers.push(AnswerTable { source: source.to_string(), variable: var.name().to_string(), entries });
        match question_answer_labels(eig, var) {
            Ok(qa) => self.push(id, anchor::ANSWERS, Status::Pass, None, format!("{} sharp answers", qa.len()), &[]),
            Err(e) => {
                let ranks: Vec<usize> = labels.iter().map(|l| l.rank).collect();
                self.push(id, anchor::ANSWERS, Status::Fail, None, e.to_string(), &[("ranks", json!(ranks))]);
            }
        }
    }

    /// Single coherent system of one variable under the regular
    /// representation of its induced group.
    fn single_operator_checks(&mut self, var: &ConceptualVariable, g: &InducedGroup) {
        let name = var.name();
        let u = permutation_representation(&g.action).with_tolerance(self.s.tolerance);
        let d = u.dim();
        if self.s.fiducial_index >= d {
            self.push(
                format!("operator[{name}].resolution"),
                anchor::COHERENT,
                Status::Fail,
                None,
                format!("fiducial index {} out of range for dimension {d}", self.s.fiducial_index),
                &[],
            );
            return;
        }
        let system = match build_coherent_system(&u, &basis_vector(d, self.s.fiducial_index)) {
            Ok(s) => s,
            Err(e) => {
                self.push(
                    format!("operator[{name}].resolution"),
                    anchor::COHERENT,
                    Status::Fail,
                    None,
                    e.to_string(),
                    &[],
                );
                return;
            }
        };
        let res = resolution_of_identity(&system);
        self.pass_if(
            format!("operator[{name}].resolution"),
            anchor::COHERENT,
            res.passes,
            Some(res.residual),
            format!(
                "{} coherent states in dimension {d}, c = {}",
                system.states().len(),
                crate::report::fmt_num(res.weight)
            ),
            &[],
        );
        let one = one_to_one_check(&system);
        let w = match one {
            OneToOne::Collision { g1, g2 } => vec![("g1", json!(g1)), ("g2", json!(g2))],
            OneToOne::Injective => vec![],
        };
        self.pass_if(
            format!("operator[{name}].one_to_one"),
            anchor::ONE_TO_ONE,
            one.holds(),
            None,
            format!("{one:?}"),
            &w,
        );
        let Some(values) = var.numeric_values() else { return };
        // coset x is the value g(x) theta_0 with theta_0 the first value
        let per_coset: Vec<f64> =
            system.cosets().representatives().iter().map(|&r| values[g.action.act(r, 0)]).collect();
        match operator_from_variable(&system, &per_coset) {
            Ok(mut op) => {
                op.source_variable = name.to_string();
                if let Ok(eig) = eigensystem(&op, self.s.tolerance) {
                    self.dump_operator(&op, &eig, "single");
                }
            }
            Err(e) => self.push(
                format!("operator[{name}].single"),
                anchor::COHERENT,
                Status::Skipped,
                None,
                e.to_string(),
                &[],
            ),
        }
    }

    fn spin_checks(&mut self) {
        for text in self.doc.options.spin.clone() {
            let two_r = parse_spin(&text).expect("validated");
            let sr = match build_spin(two_r) {
                Ok(sr) => sr,
                Err(e) => {
                    self.push(format!("spin[{text}].build"), anchor::SPIN_DIM, Status::Fail, None, e.to_string(), &[]);
                    continue;
                }
            };
            let c = verify_commutation(&sr);
            self.pass_if(
                format!("spin[{text}].commutation"),
                anchor::SPIN_COMMUTATION,
                c <= SPIN_TOLERANCE,
                Some(c),
                "ladder relations".into(),
                &[],
            );
            let e = verify_eigen(&sr);
            self.pass_if(
                format!("spin[{text}].eigen"),
                anchor::SPIN_EIGEN,
                e.holds(SPIN_TOLERANCE),
                Some(e.a0_residual.max(e.casimir_residual)),
                format!("A0 |m> = m |m>, A^2 |m> = {} |m>", crate::report::fmt_num(sr.r() * (sr.r() + 1.0))),
                &[],
            );
            self.pass_if(
                format!("spin[{text}].dimension"),
                anchor::SPIN_DIM,
                sr.dim() as i64 == two_r + 1,
                None,
                format!("dim = {}", sr.dim()),
                &[],
            );
            let turn = rotation_operator(&sr, [0.0, 0.0, 1.0], 2.0 * std::f64::consts::PI).expect("unit axis");
            let sign = if sr.is_half_integer() { -1.0 } else { 1.0 };
            let r = max_diff(&turn, &(identity(sr.dim()) * crate::linalg::C64::from(sign)));
            self.pass_if(
                format!("spin[{text}].full_turn"),
                anchor::SPIN_TURN,
                r <= FULL_TURN_TOLERANCE,
                Some(r),
                format!("exp(2 pi i A_z) = {sign} I"),
                &[],
            );
        }
        let grids = self.doc.options.stern_gerlach.clone();
        for n in &grids {
            match in_plane_permissibility(*n) {
                Ok(results) => {
                    let bad = results.iter().find(|(_, p)| !p.holds());
                    let w = match bad {
                        Some((name, Permissibility::Violation { k, phi1, phi2 })) => vec![
                            ("variable", json!(name)),
                            ("k", json!(k)),
                            ("phi1", json!(phi1)),
                            ("phi2", json!(phi2)),
                        ],
                        _ => vec![],
                    };
                    let failing = results.iter().filter(|(_, p)| !p.holds()).count();
                    self.pass_if(
                        format!("stern_gerlach[{n}]"),
                        anchor::IN_PLANE,
                        failing == 0,
                        None,
                        format!("{failing} of {} in-plane components not permissible under rotations", results.len()),
                        &w,
                    );
                }
                Err(e) => {
                    self.push(format!("stern_gerlach[{n}]"), anchor::IN_PLANE, Status::Fail, None, e.to_string(), &[])
                }
            }
        }
        if !grids.is_empty() {
            let c = full_rotation_counterexample().expect("fixed construction");
            let expected = Permissibility::Violation { k: 1, phi1: 0, phi2: 2 };
            let w = match c.theta_z {
                Permissibility::Violation { k, phi1, phi2 } => vec![
                    ("k", json!(k)),
                    ("phi1", json!(crate::spin::SIGNED_AXES[phi1])),
                    ("phi2", json!(crate::spin::SIGNED_AXES[phi2])),
                ],
                Permissibility::Permissible => vec![],
            };
            self.pass_if(
                "full_rotation".into(),
                anchor::FULL_ROTATION,
                c.theta_z == expected && !c.theta_x.holds(),
                None,
                "theta_z is not permissible under the cube rotations (k = quarter turn about x)".into(),
                &w,
            );
        }
    }
}

fn build_context(doc: &ContextDocument, k: &GeneratedGroup) -> Result<(Vec<ConceptualVariable>, Context), String> {
    let variables =
        doc.variables.iter().map(|v| v.build().map_err(|e| e.to_string())).collect::<Result<Vec<_>, _>>()?;
    let family = doc
        .maximal_family
        .iter()
        .map(|n| variables.iter().find(|v| v.name() == n).cloned().expect("names validated"))
        .collect();
    let context = Context::new(k.action.clone(), family).map_err(|e| e.to_string())?;
    Ok((variables, context))
}

pub fn run(doc: &ContextDocument, settings: Settings, scope: &Scope) -> VerificationReport {
    let mut run = Run {
        doc,
        s: settings,
        report: VerificationReport::new(Environment {
            tolerance: num(settings.tolerance),
            fiducial_index: settings.fiducial_index,
            max_order: settings.max_order,
            seeds: "none".into(),
        }),
    };
    if *scope == Scope::Spin {
        run.spin_checks();
        return run.report;
    }
    let Some(k) = run.group_checks() else {
        run.skip(&[("variables".into(), anchor::PERMISSIBLE)], "group K unavailable");
        return run.report;
    };
    let (variables, context) = match build_context(doc, &k) {
        Ok(x) => x,
        Err(e) => {
            run.push("variables".into(), anchor::PERMISSIBLE, Status::Fail, None, e, &[]);
            return run.report;
        }
    };
    let selected: Vec<ConceptualVariable> = match scope {
        Scope::Variable(name) => variables.iter().filter(|v| v.name() == name).cloned().collect(),
        _ => variables.clone(),
    };
    let induced = run.variable_checks(&k, &selected, &context);
    let pairs: Vec<usize> = match scope {
        Scope::All => (0..doc.pairs.len()).collect(),
        Scope::Pair(i) => vec![*i],
        Scope::Spin => vec![],
        Scope::Variable(name) => {
            (0..doc.pairs.len()).filter(|&i| &doc.pairs[i].theta == name || &doc.pairs[i].xi == name).collect()
        }
    };
    if let Scope::Variable(name) = scope {
        if let (Some(v), Some(g)) = (selected.first(), induced.get(name)) {
            run.single_operator_checks(v, g);
        }
    }
    let induced_all = if matches!(scope, Scope::Variable(_)) {
        variables.iter().filter_map(|v| induced_group(v, &k.action).ok().map(|g| (v.name().to_string(), g))).collect()
    } else {
        induced
    };
    for i in pairs {
        run.pair_checks(i, &k, &variables, &context, &induced_all);
    }
    if matches!(scope, Scope::All) {
        run.spin_checks();
    }
    run.report
}

/// Every check for the document.
pub fn run_verify(doc: &ContextDocument, settings: Settings) -> VerificationReport {
    run(doc, settings, &Scope::All)
}

/// A one-point document that carries only spin options.
pub fn spin_document(spins: Vec<String>, stern_gerlach: Vec<usize>) -> ContextDocument {
    ContextDocument {
        schema_version: crate::document::SCHEMA_VERSION.to_string(),
        phi_space: crate::document::PhiSpace { size: 1, labels: None },
        group_k: crate::document::GroupSpec { generators: vec![] },
        transformations: BTreeMap::new(),
        variables: vec![],
        maximal_family: vec![],
        pairs: vec![],
        options: crate::document::Options { spin: spins, stern_gerlach, ..Default::default() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::parse_context_str;

    const TWO_BIT: &str = r#"{
      "schema_version": "1.0",
      "phi_space": { "size": 4 },
      "group_K": { "generators": [[2, 3, 0, 1], [1, 0, 3, 2]] },
      "transformations": { "swap": [0, 2, 1, 3], "cycle": [1, 2, 3, 0] },
      "variables": [
        { "name": "theta", "values": [0, 0, 1, 1], "numeric_values": [0, 1] },
        { "name": "xi", "values": [0, 1, 0, 1], "numeric_values": [0, 1] }
      ],
      "maximal_family": ["theta", "xi"],
      "pairs": [{ "theta": "theta", "xi": "xi", "k": ["swap"] }, { "theta": "theta", "xi": "xi", "k": ["cycle"] }]
    }"#;

    fn report(text: &str) -> VerificationReport {
        let doc = parse_context_str(text).unwrap();
        run_verify(&doc, Settings::from_document(&doc))
    }

    fn status(r: &VerificationReport, id: &str) -> Status {
        r.check(id).unwrap_or_else(|| panic!("missing {id}")).status
    }

    #[test]
    fn empty_variable_list_gives_group_checks_only() {
        let r =
            report(r#"{"schema_version": "1.0", "phi_space": {"size": 3}, "group_K": {"generators": [[1, 2, 0]]}}"#);
        let ids: Vec<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids, ["group.axioms", "group.orbit_stabilizer"]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn unrelated_pair_skips_dependents() {
        let r = report(TWO_BIT);
        assert_eq!(status(&r, "pair[0].related"), Status::Pass);
        assert_eq!(status(&r, "pair[1].related"), Status::Fail);
        assert!(r.check("pair[1].related").unwrap().witness.contains_key("phi"));
        let skipped: Vec<&str> = r
            .checks
            .iter()
            .filter(|c| c.id.starts_with("pair[1].") && c.status == Status::Skipped)
            .map(|c| c.id.as_str())
            .collect();
        assert_eq!(skipped.len(), Run::pair_ids(1).len());
    }

    #[test]
    fn two_bit_outcomes() {
        let r = report(TWO_BIT);
        for id in [
            "pair[0].W",
            "pair[0].joint_irreducible",
            "pair[0].resolution",
            "pair[0].covariance",
            "pair[0].covariance_k",
        ] {
            assert_eq!(status(&r, id), Status::Pass, "{id}");
        }
        assert_eq!(status(&r, "pair[0].joint_labels"), Status::Fail);
        assert_eq!(r.operators.len(), 2);
    }

    #[test]
    fn fiducial_out_of_range_is_reported() {
        let doc = parse_context_str(TWO_BIT).unwrap();
        let s = Settings { fiducial_index: 7, ..Settings::from_document(&doc) };
        let r = run(&doc, s, &Scope::Pair(0));
        assert_eq!(status(&r, "pair[0].resolution"), Status::Fail);
        assert_eq!(status(&r, "pair[0].joint_labels"), Status::Skipped);
    }

    #[test]
    fn spin_scope() {
        let doc = spin_document(vec!["1/2".into(), "2".into()], vec![5]);
        let r = run(&doc, Settings::from_document(&doc), &Scope::Spin);
        assert_eq!(status(&r, "spin[1/2].full_turn"), Status::Pass);
        assert_eq!(status(&r, "spin[2].eigen"), Status::Pass);
        assert_eq!(status(&r, "stern_gerlach[5]"), Status::Fail);
        assert_eq!(status(&r, "full_rotation"), Status::Pass);
        assert!(doc.violations().is_empty());
    }
}
