//! Coherent-state systems `{U(g)|f>}` of a unitary representation, their
//! isotropy subgroup and phases, resolution of the identity, and the
//! operator `A = c sum_x theta(x) |x><x|` of a single variable.

use crate::error::{Error, Result};
use crate::group::{left_cosets, CosetSpace, Subgroup};
use crate::linalg::{self, identity, max_diff, outer, CMatrix, CVector, C64};
use crate::repr::{Operator, UnitaryRepresentation};

#[derive(Debug, Clone)]
pub struct CoherentStateSystem {
    rep: UnitaryRepresentation,
    fiducial: CVector,
    isotropy: Subgroup,
    alpha: Vec<f64>,
    cosets: CosetSpace,
    states: Vec<CVector>,
    weight: f64,
}

impl CoherentStateSystem {
    pub fn rep(&self) -> &UnitaryRepresentation {
        &self.rep
    }

    pub fn fiducial(&self) -> &CVector {
        &self.fiducial
    }

    pub fn isotropy(&self) -> &Subgroup {
        &self.isotropy
    }

    /// Phase `alpha(e)` for each member of the isotropy subgroup, aligned
    /// with `isotropy().members()`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn cosets(&self) -> &CosetSpace {
        &self.cosets
    }

    /// `|x> = U(g(x)) |f>` for the minimal representative `g(x)`.
    pub fn states(&self) -> &[CVector] {
        &self.states
    }

    /// `c = d / |X|`, the weight making `c sum_x |x><x|` trace-normalised.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.rep.tolerance()
    }

    /// The coset permutation `x -> g x`.
    pub fn coset_transport(&self, g: usize) -> Vec<usize> {
        let group = self.rep.group();
        (0..self.cosets.len()).map(|z| self.cosets.translate(group, g, z)).collect()
    }
}

fn check_fiducial(rep: &UnitaryRepresentation, fiducial: &CVector) -> Result<()> {
    if fiducial.len() != rep.dim() {
        return Err(Error::DimensionMismatch(fiducial.len(), rep.dim()));
    }
    let norm = fiducial.norm();
    if (norm - 1.0).abs() > rep.tolerance() {
        return Err(Error::InvalidArgument(format!("fiducial has norm {norm}, expected 1")));
    }
    Ok(())
}

/// `E = {g : U(g)|f> = exp(i alpha(g)) |f>}` with `alpha(g) = arg <f|U(g)|f>`.
///
/// `g` is a member when `1 - |<f|U(g)|f>| <= tol`; overlaps with
/// `tol < 1 - |s| < 2 tol` are rejected as ambiguous.
pub fn isotropy_of_state(rep: &UnitaryRepresentation, fiducial: &CVector) -> Result<(Subgroup, Vec<f64>)> {
    check_fiducial(rep, fiducial)?;
    let tol = rep.tolerance();
    let mut members = Vec::new();
    let mut alpha = Vec::new();
    for g in rep.group().elements() {
        let s = fiducial.dotc(&(rep.matrix(g) * fiducial));
        let gap = 1.0 - s.norm();
        if gap <= tol {
            members.push(g);
            alpha.push(s.arg());
        } else if gap < 2.0 * tol {
            return Err(Error::NumericalAmbiguity { element: g, overlap: s.norm() });
        }
    }
    let subgroup = Subgroup::new(rep.group(), members)?;
    Ok((subgroup, alpha))
}

pub fn build_coherent_system(rep: &UnitaryRepresentation, fiducial: &CVector) -> Result<CoherentStateSystem> {
    let (isotropy, alpha) = isotropy_of_state(rep, fiducial)?;
    let cosets = left_cosets(rep.group(), &isotropy)?;
    let states: Vec<CVector> = cosets.representatives().iter().map(|&g| rep.matrix(g) * fiducial).collect();
    let weight = rep.dim() as f64 / states.len() as f64;
    Ok(CoherentStateSystem { rep: rep.clone(), fiducial: fiducial.clone(), isotropy, alpha, cosets, states, weight })
}

/// Result of testing `c sum_x |x><x| = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    /// `c = d / trace(B)`.
    pub weight: f64,
    /// Max-norm of `c B - I`.
    pub residual: f64,
    pub passes: bool,
}

pub fn frame_operator(states: &[CVector], d: usize) -> CMatrix {
    states.iter().fold(CMatrix::zeros(d, d), |acc, v| acc + outer(v))
}

/// Resolution test for an arbitrary finite family of states.
pub fn resolution_for_states(states: &[CVector], d: usize, tolerance: f64) -> Resolution {
    let b = frame_operator(states, d);
    let trace = b.trace().re;
    if trace <= 0.0 {
        return Resolution { weight: 0.0, residual: 1.0, passes: d == 0 };
    }
    let weight = d as f64 / trace;
    let residual = max_diff(&(b * C64::from(weight)), &identity(d));
    Resolution { weight, residual, passes: residual <= tolerance }
}

/// A reducible representation yields a failing resolution, not an error.
pub fn resolution_of_identity(system: &CoherentStateSystem) -> Resolution {
    resolution_for_states(system.states(), system.dim(), system.tolerance())
}

/// Whether `g -> U(g)|f>` is injective up to phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneToOne {
    Injective,
    /// `U(g1)|f>` and `U(g2)|f>` differ only by a phase.
    Collision {
        g1: usize,
        g2: usize,
    },
}

impl OneToOne {
    pub fn holds(&self) -> bool {
        matches!(self, OneToOne::Injective)
    }
}

/// Unit vectors are identified when `|<u|v>| >= 1 - tol`.
pub fn parallel(u: &CVector, v: &CVector, tol: f64) -> bool {
    u.dotc(v).norm() >= 1.0 - tol
}

pub fn one_to_one_check(system: &CoherentStateSystem) -> OneToOne {
    let rep = system.rep();
    let tol = system.tolerance();
    let vectors: Vec<CVector> = rep.group().elements().map(|g| rep.matrix(g) * system.fiducial()).collect();
    for g1 in 0..vectors.len() {
        for g2 in g1 + 1..vectors.len() {
            if parallel(&vectors[g1], &vectors[g2], tol) {
                return OneToOne::Collision { g1, g2 };
            }
        }
    }
    OneToOne::Injective
}

/// `A = c sum_x theta(x) |x><x|` with `values[x]` per coset.
pub fn operator_from_variable(system: &CoherentStateSystem, values: &[f64]) -> Result<Operator> {
    operator_from_variable_named(system, values, "theta")
}

pub fn operator_from_variable_named(system: &CoherentStateSystem, values: &[f64], name: &str) -> Result<Operator> {
    if values.len() != system.states().len() {
        return Err(Error::DimensionMismatch(values.len(), system.states().len()));
    }
    let resolution = resolution_of_identity(system);
    if !resolution.passes {
        return Err(Error::NoResolution { residual: resolution.residual });
    }
    let d = system.dim();
    let sum =
        system.states().iter().zip(values).fold(CMatrix::zeros(d, d), |acc, (v, &t)| acc + outer(v) * C64::from(t));
    Ok(Operator::new(sum * C64::from(resolution.weight), name, system.tolerance()))
}

/// The same operator built from a measure on an underlying point set:
/// uniform weight on each point, state `|x(p)>` for point `p`, normalised
/// so that the point sum of projectors resolves the identity.
pub fn operator_from_point_measure(
    system: &CoherentStateSystem,
    point_coset: &[usize],
    values: &[f64],
) -> Result<Operator> {
    if point_coset.len() != values.len() {
        return Err(Error::DimensionMismatch(point_coset.len(), values.len()));
    }
    if let Some(&z) = point_coset.iter().find(|&&z| z >= system.states().len()) {
        return Err(Error::InvalidArgument(format!("coset index {z} out of range")));
    }
    let states: Vec<CVector> = point_coset.iter().map(|&z| system.states()[z].clone()).collect();
    let d = system.dim();
    let resolution = resolution_for_states(&states, d, system.tolerance());
    if !resolution.passes {
        return Err(Error::NoResolution { residual: resolution.residual });
    }
    let sum = states.iter().zip(values).fold(CMatrix::zeros(d, d), |acc, (v, &t)| acc + outer(v) * C64::from(t));
    Ok(Operator::new(sum * C64::from(resolution.weight), "theta", system.tolerance()))
}

/// Largest violation of `alpha(e1 e2) = alpha(e1) + alpha(e2) (mod 2 pi)`.
pub fn phase_character_residual(system: &CoherentStateSystem) -> f64 {
    let group = system.rep().group();
    let members = system.isotropy().members();
    let alpha_of = |g: usize| system.alpha()[members.binary_search(&g).unwrap()];
    let mut worst: f64 = 0.0;
    for &a in members {
        for &b in members {
            let lhs = C64::from_polar(1.0, alpha_of(group.mul(a, b)));
            let rhs = C64::from_polar(1.0, alpha_of(a) + alpha_of(b));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// Standard basis vector `e_i` of length `d`, the default fiducial.
pub fn default_fiducial(d: usize, index: usize) -> Result<CVector> {
    if index >= d {
        return Err(Error::InvalidArgument(format!("fiducial index {index} out of range for dimension {d}")));
    }
    Ok(linalg::basis_vector(d, index))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;
    use std::sync::Arc;

    use super::*;
    use crate::group::{standard_group, FiniteGroup, StandardKind, DEFAULT_ORDER_BOUND};
    use crate::linalg::{c, real_matrix};
    use crate::repr::{generate_matrix_group, regular_representation, trivial_representation};

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(standard_group(StandardKind::Cyclic, n, DEFAULT_ORDER_BOUND).unwrap())
    }

    fn vec2(a: f64, b: f64) -> CVector {
        CVector::from_vec(vec![c(a, 0.0), c(b, 0.0)])
    }

    fn qubit() -> UnitaryRepresentation {
        let x = real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let s = real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]]);
        generate_matrix_group(&[x, s], 1e-9, 64).unwrap().0
    }

    #[test]
    fn isotropy_examples() {
        let trivial = trivial_representation(Arc::new(FiniteGroup::from_cayley(&[vec![0]]).unwrap()), 1);
        let (e, alpha) = isotropy_of_state(&trivial, &default_fiducial(1, 0).unwrap()).unwrap();
        assert_eq!(e.members(), &[0]);
        assert_eq!(alpha, vec![0.0]);

        let r2 = regular_representation(&z(2), 8).unwrap();
        let (e, _) = isotropy_of_state(&r2, &vec2(1.0, 0.0)).unwrap();
        assert_eq!(e.members(), &[0]);
        let s = 1.0 / 2f64.sqrt();
        let (e, alpha) = isotropy_of_state(&r2, &vec2(s, -s)).unwrap();
        assert_eq!(e.members(), &[0, 1]);
        assert!((alpha[1].abs() - PI).abs() < 1e-12);
    }

    #[test]
    fn ambiguity_and_bad_fiducials() {
        let r2 = regular_representation(&z(2), 8).unwrap().with_tolerance(0.1);
        // overlap 2ab = 0.85 lies in the band (0.8, 0.9)
        let a = ((1.0 + (1.0f64 - 0.85 * 0.85).sqrt()) / 2.0).sqrt();
        let b = (1.0 - a * a).sqrt();
        assert!(matches!(isotropy_of_state(&r2, &vec2(a, b)), Err(Error::NumericalAmbiguity { element: 1, .. })));
        let r2 = regular_representation(&z(2), 8).unwrap();
        assert!(isotropy_of_state(&r2, &vec2(1.0, 1.0)).is_err());
        assert!(isotropy_of_state(&r2, &CVector::from_vec(vec![c(1.0, 0.0)])).is_err());
    }

    #[test]
    fn build_examples() {
        let triv = trivial_representation(Arc::new(FiniteGroup::from_cayley(&[vec![0]]).unwrap()), 1);
        let sys = build_coherent_system(&triv, &default_fiducial(1, 0).unwrap()).unwrap();
        assert_eq!(sys.states().len(), 1);
        let r2 = regular_representation(&z(2), 8).unwrap();
        let sys = build_coherent_system(&r2, &vec2(1.0, 0.0)).unwrap();
        assert_eq!(sys.states(), &[vec2(1.0, 0.0), vec2(0.0, 1.0)]);
        let r3 = regular_representation(&z(3), 8).unwrap();
        let sys = build_coherent_system(&r3, &default_fiducial(3, 0).unwrap()).unwrap();
        for (x, v) in sys.states().iter().enumerate() {
            assert_eq!(v, &linalg::basis_vector(3, x));
        }
    }

    #[test]
    fn resolution_examples() {
        let triv = trivial_representation(Arc::new(FiniteGroup::from_cayley(&[vec![0]]).unwrap()), 1);
        let r = resolution_of_identity(&build_coherent_system(&triv, &default_fiducial(1, 0).unwrap()).unwrap());
        assert_eq!((r.weight, r.residual, r.passes), (1.0, 0.0, true));

        let q = qubit();
        let sys = build_coherent_system(&q, &default_fiducial(2, 0).unwrap()).unwrap();
        let r = resolution_of_identity(&sys);
        assert!(r.passes && r.residual <= 1e-12);

        let r2 = regular_representation(&z(2), 8).unwrap();
        let r = resolution_of_identity(&build_coherent_system(&r2, &vec2(1.0, 0.0)).unwrap());
        assert!(r.passes && r.residual == 0.0);
        let (a, b) = (0.8, 0.6);
        let r = resolution_of_identity(&build_coherent_system(&r2, &vec2(a, b)).unwrap());
        assert!(!r.passes);
        // c B - I = [[0, 2ab], [2ab, 0]] with c = 1; closed form for real a, b
        assert!((r.residual - 2.0 * a * b).abs() < 1e-12);
    }

    #[test]
    fn resolution_residual_closed_form() {
        // B = [[|a|^2 + |b|^2, 2 Re(a conj b)], [.., ..]] for the regular Z2 orbit
        let r2 = regular_representation(&z(2), 8).unwrap();
        for (a, b) in [(c(0.8, 0.0), c(0.6, 0.0)), (c(0.8, 0.0), c(0.0, 0.6)), (c(0.6, 0.0), c(0.48, 0.64))] {
            let v = CVector::from_vec(vec![a, b]);
            let r = resolution_of_identity(&build_coherent_system(&r2, &v).unwrap());
            let expected = 2.0 * (a * b.conj()).re.abs();
            assert!((r.residual - expected).abs() < 1e-12);
            assert_eq!(r.passes, expected <= 1e-9);
        }
    }

    #[test]
    fn one_to_one_examples() {
        let r3 = regular_representation(&z(3), 8).unwrap();
        let sys = build_coherent_system(&r3, &default_fiducial(3, 0).unwrap()).unwrap();
        assert_eq!(one_to_one_check(&sys), OneToOne::Injective);
        let r2 = regular_representation(&z(2), 8).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let fixed = build_coherent_system(&r2, &vec2(s, s)).unwrap();
        assert_eq!(one_to_one_check(&fixed), OneToOne::Collision { g1: 0, g2: 1 });
    }

    #[test]
    fn operator_examples() {
        let q = qubit();
        let sys = build_coherent_system(&q, &default_fiducial(2, 0).unwrap()).unwrap();
        let n = sys.states().len();
        let a = operator_from_variable(&sys, &vec![1.0; n]).unwrap();
        assert!(max_diff(&a.matrix, &identity(2)) <= 1e-12);
        let a = operator_from_variable(&sys, &vec![0.0; n]).unwrap();
        assert_eq!(linalg::max_abs(&a.matrix), 0.0);

        let r2 = regular_representation(&z(2), 8).unwrap();
        let sys = build_coherent_system(&r2, &vec2(1.0, 0.0)).unwrap();
        let a = operator_from_variable(&sys, &[0.0, 1.0]).unwrap();
        assert!(a.hermitian);
        let (vals, _) = linalg::hermitian_eigen(&a.matrix);
        assert!((vals[0]).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);

        let bad = build_coherent_system(&r2, &vec2(0.8, 0.6)).unwrap();
        assert!(matches!(operator_from_variable(&bad, &[0.0, 1.0]), Err(Error::NoResolution { .. })));
        assert!(operator_from_variable(&sys, &[0.0]).is_err());
    }
}
