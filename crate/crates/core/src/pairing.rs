//! Two related maximal variables `theta`, `xi = theta o k` and the joint
//! construction on `Omega_theta x Omega_xi`: the group `N` generated by `G`
//! on the first coordinate, its copy `H` on the second and the swap `j`;
//! the involution `J`; the representation `W` of `N`; and the joint
//! operators `A^theta`, `A^xi`.
//!
//! Both coordinates are indexed by theta's value indices: a xi value is
//! identified with the theta value carrying the same label.

use std::sync::Arc;

use crate::coherent::{build_coherent_system, resolution_for_states, CoherentStateSystem};
use crate::error::{Error, Result};
use crate::group::{generate_permutation_group, FiniteGroup, GeneratedGroup};
use crate::linalg::{canonical_phase, identity, max_diff, outer, CMatrix, CVector, C64};
use crate::repr::{commutant_dimension, invariant_subspace_split, is_irreducible, Operator, UnitaryRepresentation};
use crate::variables::{is_maximally_accessible, relation_violation, ConceptualVariable, Context, InducedGroup};

/// `theta`, `xi` and a transformation `k` of the inaccessible space with
/// `xi(phi) = theta(k phi)`.
#[derive(Debug, Clone)]
pub struct RelatedPair {
    pub theta: ConceptualVariable,
    pub xi: ConceptualVariable,
    /// `k` as a permutation of the inaccessible space.
    pub k: Vec<usize>,
    /// Index of `k` in `K`, if it belongs to `K`.
    pub k_element: Option<usize>,
    pub k_squared_identity: bool,
    /// `phi -> (theta(phi), xi(phi))` is a bijection onto the value product.
    pub product_structure: bool,
    /// Theta value index of each xi value index.
    pub xi_to_theta: Vec<usize>,
}

impl RelatedPair {
    /// Number of values of either variable.
    pub fn side(&self) -> usize {
        self.theta.value_count()
    }

    /// Product point index `a * side + b` of `(theta(phi), xi(phi))`.
    pub fn product_point(&self, phi: usize) -> usize {
        self.theta.value(phi) * self.side() + self.xi_to_theta[self.xi.value(phi)]
    }

    /// Xi's numeric values re-indexed by theta value index.
    pub fn xi_numeric_by_theta_index(&self) -> Option<Vec<f64>> {
        let numeric = self.xi.numeric_values()?;
        let mut out = vec![0.0; self.side()];
        for (v, &t) in self.xi_to_theta.iter().enumerate() {
            out[t] = numeric[v];
        }
        Some(out)
    }
}

pub fn build_related_pair(
    context: &Context,
    theta: &ConceptualVariable,
    xi: &ConceptualVariable,
    k: &[usize],
) -> Result<RelatedPair> {
    let m = context.phi_size();
    let mut seen = vec![false; m];
    if k.len() != m || k.iter().any(|&y| y >= m || std::mem::replace(&mut seen[y], true)) {
        return Err(Error::InvalidArgument("k is not a permutation of the inaccessible space".into()));
    }
    for v in [theta, xi] {
        if !is_maximally_accessible(context, v)? {
            return Err(Error::NotMaximal(v.name().to_string()));
        }
    }
    if let Some(phi) = relation_violation(theta, xi, k) {
        return Err(Error::NotRelated { phi });
    }
    let xi_to_theta: Vec<usize> = xi
        .value_labels()
        .iter()
        .map(|label| theta.value_labels().iter().position(|l| l == label).expect("related values share labels"))
        .collect();
    let side = theta.value_count();
    let mut hit = vec![false; side * side];
    for phi in 0..m {
        hit[theta.value(phi) * side + xi_to_theta[xi.value(phi)]] = true;
    }
    let product_structure = m == side * side && hit.iter().all(|&h| h);
    let k_squared_identity = (0..m).all(|phi| k[k[phi]] == phi);
    if product_structure && !k_squared_identity {
        return Err(Error::KNotInvolution);
    }
    Ok(RelatedPair {
        theta: theta.clone(),
        xi: xi.clone(),
        k: k.to_vec(),
        k_element: context.k_action().element_for(k),
        k_squared_identity,
        product_structure,
        xi_to_theta,
    })
}

/// Greedy generating set: each element not yet generated by the earlier
/// picks, in index order.
pub fn greedy_generators(induced: &InducedGroup) -> Result<Vec<usize>> {
    let group = &induced.group;
    let points = induced.action.space_size();
    let mut picked: Vec<usize> = Vec::new();
    let mut covered = vec![false; group.order()];
    covered[group.identity()] = true;
    for g in group.elements() {
        if covered[g] {
            continue;
        }
        picked.push(g);
        let perms: Vec<Vec<usize>> = picked.iter().map(|&p| induced.action.permutation(p).to_vec()).collect();
        let closure = generate_permutation_group(points, &perms, group.order())?;
        for h in closure.group.elements() {
            let perm = closure.action.permutation(h);
            covered[induced.action.element_for(perm).expect("closure stays in G")] = true;
        }
    }
    Ok(picked)
}

/// `N` acting on product points `a * side + b`.
#[derive(Debug, Clone)]
pub struct JointGroup {
    pub generated: GeneratedGroup,
    pub side: usize,
    pub g_group: Arc<FiniteGroup>,
    /// Elements of `G` used as generators, in generator order.
    pub g_generators: Vec<usize>,
    /// `N` element of `(g, e)` for every `g` in `G`.
    pub g_embed: Vec<usize>,
    /// `N` element of `(e, h)` for every `h` in `G`.
    pub h_embed: Vec<usize>,
    /// `N` element of the coordinate swap.
    pub j: usize,
}

impl JointGroup {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.generated.group
    }

    pub fn act(&self, n: usize, point: usize) -> usize {
        self.generated.action.act(n, point)
    }

    /// `(a, b)` of a product point.
    pub fn split(&self, point: usize) -> (usize, usize) {
        (point / self.side, point % self.side)
    }
}

pub fn build_joint_group(induced: &InducedGroup, bound: usize) -> Result<JointGroup> {
    let action = &induced.action;
    if !action.is_transitive() {
        return Err(Error::NotTransitive);
    }
    if let Some(point) = action.nontrivial_isotropy_point() {
        return Err(Error::NontrivialIsotropy { point });
    }
    let side = action.space_size();
    let on_first =
        |g: usize| -> Vec<usize> { (0..side * side).map(|p| action.act(g, p / side) * side + p % side).collect() };
    let on_second =
        |g: usize| -> Vec<usize> { (0..side * side).map(|p| p / side * side + action.act(g, p % side)).collect() };
    let swap: Vec<usize> = (0..side * side).map(|p| p % side * side + p / side).collect();
    let g_generators = greedy_generators(induced)?;
    let mut gens: Vec<Vec<usize>> = g_generators.iter().map(|&g| on_first(g)).collect();
    gens.extend(g_generators.iter().map(|&g| on_second(g)));
    gens.push(swap.clone());
    let generated = generate_permutation_group(side * side, &gens, bound)?;
    let find = |perm: &[usize]| generated.action.element_for(perm).expect("generated by construction");
    let g_embed = induced.group.elements().map(|g| find(&on_first(g))).collect();
    let h_embed = induced.group.elements().map(|g| find(&on_second(g))).collect();
    let j = find(&swap);
    debug_assert!(generated.action.is_transitive());
    Ok(JointGroup { generated, side, g_group: induced.group.clone(), g_generators, g_embed, h_embed, j })
}

/// `J` swapping the first basis vectors `v0` of `H0` and `v0'` of `H0'`
/// and fixing their orthogonal complement; the identity when `U` is
/// irreducible.
pub fn build_j(u: &UnitaryRepresentation) -> Result<CMatrix> {
    let d = u.dim();
    if is_irreducible(u) {
        return Ok(identity(d));
    }
    let split = invariant_subspace_split(u)?;
    let tol = u.tolerance();
    let v0 = canonical_phase(&split.h0()[0], tol);
    let v1 = canonical_phase(&split.h0_prime()[0], tol);
    Ok(identity(d) - outer(&v0) - outer(&v1) + &v0 * v1.adjoint() + &v1 * v0.adjoint())
}

/// `W` on `N`, with the data it was built from.
#[derive(Debug, Clone)]
pub struct JointSystem {
    pub group: JointGroup,
    pub u: UnitaryRepresentation,
    pub j_matrix: CMatrix,
    pub w: UnitaryRepresentation,
    /// Largest `|W(j g j) - J U(g) J|`.
    pub relation_residual: f64,
}

impl JointSystem {
    pub fn dim(&self) -> usize {
        self.u.dim()
    }

    pub fn tolerance(&self) -> f64 {
        self.u.tolerance()
    }
}

/// Defines `W` on the generators (`U(g)`, `J U(h) J`, `J`), extends it to
/// `N` along shortlex words, and checks that every Cayley-graph edge
/// `n -> n s` agrees: `W(n s) = W(n) W(s)`.
pub fn build_w(group: &JointGroup, u: &UnitaryRepresentation, j_matrix: &CMatrix) -> Result<JointSystem> {
    if u.group() != &group.g_group {
        return Err(Error::GroupMismatch);
    }
    let d = u.dim();
    if j_matrix.nrows() != d || j_matrix.ncols() != d {
        return Err(Error::DimensionMismatch(j_matrix.nrows(), d));
    }
    let tol = u.tolerance();
    let mut gen_matrices: Vec<CMatrix> = group.g_generators.iter().map(|&g| u.matrix(g).clone()).collect();
    gen_matrices.extend(group.g_generators.iter().map(|&g| j_matrix * u.matrix(g) * j_matrix));
    gen_matrices.push(j_matrix.clone());

    let words = &group.generated.words;
    let n_group = group.group();
    let matrices: Vec<CMatrix> =
        words.iter().map(|w| w.iter().fold(identity(d), |acc, &s| acc * &gen_matrices[s])).collect();
    for n in n_group.elements() {
        for (s, &gen) in group.generated.generators.iter().enumerate() {
            let ns = n_group.mul(n, gen);
            let residual = max_diff(&matrices[ns], &(&matrices[n] * &gen_matrices[s]));
            if residual > tol {
                let mut word_b = words[n].clone();
                word_b.push(s);
                return Err(Error::NotWellDefined { element: ns, word_a: words[ns].clone(), word_b, residual });
            }
        }
    }
    let w = UnitaryRepresentation::new(n_group.clone(), matrices, tol)?;
    let relation_residual = group
        .g_group
        .elements()
        .map(|g| {
            let jgj = n_group.product(&[group.j, group.g_embed[g], group.j]);
            max_diff(w.matrix(jgj), &(j_matrix * u.matrix(g) * j_matrix))
        })
        .fold(0.0, f64::max);
    Ok(JointSystem { group: group.clone(), u: u.clone(), j_matrix: j_matrix.clone(), w, relation_residual })
}

/// Commutant dimension of `W`; irreducible iff it is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointIrreducibility {
    pub commutant_dimension: usize,
    pub holds: bool,
}

pub fn verify_joint_irreducible(joint: &JointSystem) -> JointIrreducibility {
    let dim = commutant_dimension(&joint.w);
    JointIrreducibility { commutant_dimension: dim, holds: dim == 1 }
}

/// Coset structure `Z = N / M` of the joint coherent states and the labels
/// `z -> (x, y)` read off from `g(z) (x0, y0)`.
#[derive(Debug, Clone)]
pub struct JointCosets {
    pub system: CoherentStateSystem,
    pub x_index: Vec<usize>,
    pub y_index: Vec<usize>,
    /// Every member of each coset sends the base point to the same `(x, y)`.
    pub consistent: bool,
    pub injective: bool,
    pub bijective: bool,
    /// First failure: either a coset whose members disagree (`z1 == z2`)
    /// or two cosets sharing a label.
    pub witness: Option<(usize, usize, usize, usize)>,
}

impl JointCosets {
    pub fn holds(&self) -> bool {
        self.consistent && self.bijective
    }
}

/// Non-failing form of [`joint_coset_structure`].
pub fn joint_coset_analysis(joint: &JointSystem, psi0: &CVector) -> Result<JointCosets> {
    let system = build_coherent_system(&joint.w, psi0)?;
    let group = &joint.group;
    let label = |n: usize| group.split(group.act(n, 0));
    let mut x_index = Vec::new();
    let mut y_index = Vec::new();
    let mut witness = None;
    let mut consistent = true;
    for (z, coset) in system.cosets().cosets().iter().enumerate() {
        let (x, y) = label(system.cosets().representatives()[z]);
        if coset.iter().any(|&n| label(n) != (x, y)) {
            consistent = false;
            witness.get_or_insert((z, z, x, y));
        }
        x_index.push(x);
        y_index.push(y);
    }
    let mut injective = true;
    'outer: for z2 in 0..x_index.len() {
        for z1 in 0..z2 {
            if (x_index[z1], y_index[z1]) == (x_index[z2], y_index[z2]) {
                injective = false;
                witness.get_or_insert((z1, z2, x_index[z2], y_index[z2]));
                break 'outer;
            }
        }
    }
    let bijective = injective && x_index.len() == group.side * group.side;
    Ok(JointCosets { system, x_index, y_index, consistent, injective, bijective, witness })
}

pub fn joint_coset_structure(joint: &JointSystem, psi0: &CVector) -> Result<JointCosets> {
    let cosets = joint_coset_analysis(joint, psi0)?;
    if let Some((z1, z2, x, y)) = cosets.witness {
        return Err(Error::JointLabelFailure { z1, z2, x, y });
    }
    Ok(cosets)
}

/// The joint states `W(n) psi0` labelled by `n (x0, y0)`, summed over all
/// of `N` with uniform weight. When the coset labels are consistent this
/// equals the coset sum up to the factor `|M|`, which the trace
/// normalisation absorbs.
#[derive(Debug, Clone)]
pub struct JointFrame {
    pub side: usize,
    pub states: Vec<CVector>,
    pub points: Vec<usize>,
    /// `c` with `c sum_n |psi_n><psi_n| = I`.
    pub weight: f64,
    pub resolution_residual: f64,
    tolerance: f64,
}

pub fn joint_frame(joint: &JointSystem, psi0: &CVector) -> Result<JointFrame> {
    let d = joint.dim();
    if psi0.len() != d {
        return Err(Error::DimensionMismatch(psi0.len(), d));
    }
    let group = joint.group.group();
    let states: Vec<CVector> = group.elements().map(|n| joint.w.matrix(n) * psi0).collect();
    let points = group.elements().map(|n| joint.group.act(n, 0)).collect();
    let tol = joint.tolerance();
    let resolution = resolution_for_states(&states, d, tol);
    if !resolution.passes {
        return Err(Error::NoResolution { residual: resolution.residual });
    }
    Ok(JointFrame {
        side: joint.group.side,
        states,
        points,
        weight: resolution.weight,
        resolution_residual: resolution.residual,
        tolerance: tol,
    })
}

impl JointFrame {
    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |v| v.len())
    }

    /// `c sum_n f(n (x0, y0)) |psi_n><psi_n|` for `f` on product points.
    pub fn operator(&self, f: &[f64], name: &str) -> Result<Operator> {
        if f.len() != self.side * self.side {
            return Err(Error::DimensionMismatch(f.len(), self.side * self.side));
        }
        let d = self.dim();
        let sum = self
            .states
            .iter()
            .zip(&self.points)
            .fold(CMatrix::zeros(d, d), |acc, (v, &p)| acc + outer(v) * C64::from(f[p]));
        Ok(Operator::new(sum * C64::from(self.weight), name, self.tolerance))
    }

    /// `P(x)` (`first = true`) or `Q(y)`.
    pub fn marginal(&self, coordinate: usize, first: bool) -> CMatrix {
        let f: Vec<f64> = (0..self.side * self.side)
            .map(|p| {
                let c = if first { p / self.side } else { p % self.side };
                if c == coordinate {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        self.operator(&f, "").expect("sized by construction").matrix
    }
}

#[derive(Debug, Clone)]
pub struct JointOperators {
    pub a_theta: Operator,
    pub a_xi: Operator,
    pub p: Vec<CMatrix>,
    pub q: Vec<CMatrix>,
    pub weight: f64,
    pub resolution_residual: f64,
}

impl JointOperators {
    /// `max(|sum_x P(x) - I|, |sum_y Q(y) - I|)`.
    pub fn marginal_residual(&self) -> f64 {
        let d = self.a_theta.dim();
        let sp = self.p.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
        let sq = self.q.iter().fold(CMatrix::zeros(d, d), |acc, m| acc + m);
        max_diff(&sp, &identity(d)).max(max_diff(&sq, &identity(d)))
    }

    pub fn commutator_norm(&self) -> f64 {
        let a = &self.a_theta.matrix;
        let b = &self.a_xi.matrix;
        crate::linalg::max_abs(&(a * b - b * a))
    }
}

/// `A^theta = sum_x theta(x) P(x)`, `A^xi = sum_y xi(y) Q(y)`, with both
/// value tables indexed by theta value index.
pub fn joint_operators(
    joint: &JointSystem,
    psi0: &CVector,
    theta_values: &[f64],
    xi_values: &[f64],
) -> Result<JointOperators> {
    let side = joint.group.side;
    for v in [theta_values, xi_values] {
        if v.len() != side {
            return Err(Error::DimensionMismatch(v.len(), side));
        }
    }
    let frame = joint_frame(joint, psi0)?;
    let p: Vec<CMatrix> = (0..side).map(|x| frame.marginal(x, true)).collect();
    let q: Vec<CMatrix> = (0..side).map(|y| frame.marginal(y, false)).collect();
    let f_theta: Vec<f64> = (0..side * side).map(|pt| theta_values[pt / side]).collect();
    let f_xi: Vec<f64> = (0..side * side).map(|pt| xi_values[pt % side]).collect();
    Ok(JointOperators {
        a_theta: frame.operator(&f_theta, "theta")?,
        a_xi: frame.operator(&f_xi, "xi")?,
        p,
        q,
        weight: frame.weight,
        resolution_residual: frame.resolution_residual,
    })
}

/// Joint operators for a related pair, using the variables' numeric values.
pub fn pair_operators(pair: &RelatedPair, joint: &JointSystem, psi0: &CVector) -> Result<JointOperators> {
    let theta = pair
        .theta
        .numeric_values()
        .ok_or_else(|| Error::InvalidArgument(format!("variable `{}` has no numeric values", pair.theta.name())))?
        .to_vec();
    let xi = pair
        .xi_numeric_by_theta_index()
        .ok_or_else(|| Error::InvalidArgument(format!("variable `{}` has no numeric values", pair.xi.name())))?;
    let mut ops = joint_operators(joint, psi0, &theta, &xi)?;
    ops.a_theta.source_variable = pair.theta.name().to_string();
    ops.a_xi.source_variable = pair.xi.name().to_string();
    Ok(ops)
}

/// If `u(t phi)` depends only on `w(phi)`, the map of value indices.
fn value_map(u: &[usize], w: &[usize], t: &[usize], size: usize) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; size];
    for phi in 0..t.len() {
        let slot = &mut map[w[phi]];
        let target = u[t[phi]];
        if *slot == usize::MAX {
            *slot = target;
        } else if *slot != target {
            return None;
        }
    }
    map.iter().all(|&v| v != usize::MAX).then_some(map)
}

/// The permutation of product points induced by a transformation `t` of
/// the inaccessible space: `(theta, xi)(phi) -> (theta, xi)(t phi)`,
/// extended either coordinatewise or with the coordinates exchanged.
pub fn transport_permutation(pair: &RelatedPair, t: &[usize]) -> Result<Vec<usize>> {
    let m = pair.theta.domain_size();
    if t.len() != m {
        return Err(Error::DimensionMismatch(t.len(), m));
    }
    let side = pair.side();
    let a: Vec<usize> = pair.theta.values().to_vec();
    let b: Vec<usize> = pair.xi.values().iter().map(|&v| pair.xi_to_theta[v]).collect();
    let perm = if let (Some(g), Some(h)) = (value_map(&a, &a, t, side), value_map(&b, &b, t, side)) {
        (0..side * side).map(|p| g[p / side] * side + h[p % side]).collect::<Vec<_>>()
    } else if let (Some(g), Some(h)) = (value_map(&a, &b, t, side), value_map(&b, &a, t, side)) {
        (0..side * side).map(|p| g[p % side] * side + h[p / side]).collect()
    } else {
        return Err(Error::UndefinedTransport);
    };
    let mut seen = vec![false; perm.len()];
    if perm.iter().any(|&p| std::mem::replace(&mut seen[p], true)) {
        return Err(Error::UndefinedTransport);
    }
    Ok(perm)
}

/// The element of `N` acting on product points as `t` does.
pub fn transport_element(pair: &RelatedPair, joint: &JointSystem, t: &[usize]) -> Result<usize> {
    let perm = transport_permutation(pair, t)?;
    joint.group.generated.action.element_for(&perm).ok_or(Error::UndefinedTransport)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{
        cyclic_shift_action, generate_permutation_group, standard_group, GroupAction, StandardKind, DEFAULT_ORDER_BOUND,
    };
    use crate::linalg::{basis_vector, real_matrix};
    use crate::repr::{direct_sum, one_dimensional, permutation_representation, trivial_representation};
    use crate::variables::induced_group;

    const SWAP: [usize; 4] = [0, 2, 1, 3];

    /// Points (b1, b2) at index 2 b1 + b2, K generated by the two bit flips.
    fn two_bit() -> (Context, ConceptualVariable, ConceptualVariable) {
        let k = generate_permutation_group(4, &[vec![2, 3, 0, 1], vec![1, 0, 3, 2]], 64).unwrap();
        let theta = ConceptualVariable::from_fn("theta", 4, |p| p / 2).with_numeric(vec![0.0, 1.0]).unwrap();
        let xi = ConceptualVariable::from_fn("xi", 4, |p| p % 2).with_numeric(vec![0.0, 1.0]).unwrap();
        let ctx = Context::new(k.action, vec![theta.clone(), xi.clone()]).unwrap();
        (ctx, theta, xi)
    }

    fn two_bit_joint() -> (RelatedPair, JointSystem) {
        let (ctx, theta, xi) = two_bit();
        let pair = build_related_pair(&ctx, &theta, &xi, &SWAP).unwrap();
        let g = induced_group(&theta, ctx.k_action()).unwrap();
        let group = build_joint_group(&g, 64).unwrap();
        let u = permutation_representation(&g.action);
        let j = build_j(&u).unwrap();
        (pair, build_w(&group, &u, &j).unwrap())
    }

    #[test]
    fn related_pair_examples() {
        let (ctx, theta, xi) = two_bit();
        let same = build_related_pair(&ctx, &theta, &theta, &[0, 1, 2, 3]).unwrap();
        assert!(same.k_squared_identity && same.k_element == Some(0));
        let pair = build_related_pair(&ctx, &theta, &xi, &SWAP).unwrap();
        assert!(pair.k_squared_identity && pair.product_structure);
        assert_eq!(pair.k_element, None);
        // swap then flip bit 1: phi=0 -> swap 0 -> flip 2, theta = 1 but xi(0) = 0
        let swap_flip: Vec<usize> = SWAP.iter().map(|&p| p ^ 2).collect();
        assert_eq!(build_related_pair(&ctx, &theta, &xi, &swap_flip).unwrap_err(), Error::NotRelated { phi: 0 });
        let coarse = ConceptualVariable::constant("c", 4);
        assert_eq!(
            build_related_pair(&ctx, &coarse, &coarse, &[0, 1, 2, 3]).unwrap_err(),
            Error::NotMaximal("c".into())
        );
    }

    #[test]
    fn product_structure_needs_involution() {
        // three-valued coordinates, k acts as the swap composed with a shift
        // of the second coordinate: xi = theta o k but k^2 != e
        let theta = ConceptualVariable::from_fn("theta", 9, |p| p / 3);
        let xi = ConceptualVariable::from_fn("xi", 9, |p| p % 3);
        let k: Vec<usize> = (0..9).map(|p| (p % 3) * 3 + (p / 3 + 1) % 3).collect();
        let ctx = Context::new(crate::group::trivial_action(9), vec![theta.clone(), xi.clone()]).unwrap();
        assert_eq!(build_related_pair(&ctx, &theta, &xi, &k).unwrap_err(), Error::KNotInvolution);
    }

    #[test]
    fn joint_group_examples() {
        let one = GroupAction::regular(Arc::new(FiniteGroup::from_cayley(&[vec![0]]).unwrap()));
        let g1 = InducedGroup { group: one.group().clone(), action: one, hom: vec![0] };
        assert_eq!(build_joint_group(&g1, 64).unwrap().group().order(), 1);

        for (n, order) in [(2usize, 8usize), (3, 18)] {
            let a = cyclic_shift_action(n).unwrap();
            let g = InducedGroup { group: a.group().clone(), action: a, hom: vec![] };
            let joint = build_joint_group(&g, 256).unwrap();
            assert_eq!(joint.group().order(), order);
            assert!(joint.generated.action.is_transitive());
            assert!(!joint.group().is_abelian());
            assert_eq!(joint.generated.action.space_size(), n * n);
        }

        let s3 = crate::group::symmetric_natural_action(3).unwrap();
        let g = InducedGroup { group: s3.group().clone(), action: s3, hom: vec![] };
        assert!(matches!(build_joint_group(&g, 256), Err(Error::NontrivialIsotropy { .. })));
        let triv = crate::group::trivial_action(2);
        let g = InducedGroup { group: triv.group().clone(), action: triv, hom: vec![] };
        assert_eq!(build_joint_group(&g, 256).unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn j_examples() {
        let z2 = Arc::new(standard_group(StandardKind::Cyclic, 2, DEFAULT_ORDER_BOUND).unwrap());
        let reg = permutation_representation(&GroupAction::regular(z2.clone()));
        assert!(max_diff(&build_j(&reg).unwrap(), &real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]])) < 1e-12);
        let triv = trivial_representation(z2.clone(), 1);
        let sign = one_dimensional(z2.clone(), &[C64::from(1.0), C64::from(-1.0)]).unwrap();
        let sum = direct_sum(&triv, &sign).unwrap();
        assert!(max_diff(&build_j(&sum).unwrap(), &real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]])) < 1e-12);
        assert_eq!(build_j(&sign).unwrap(), identity(1));
        for rep in [reg, sum] {
            let j = build_j(&rep).unwrap();
            assert!(max_diff(&(&j * &j), &identity(2)) <= 1e-15);
        }
    }

    #[test]
    fn w_two_bit() {
        let (_, joint) = two_bit_joint();
        assert_eq!(joint.w.group().order(), 8);
        assert!(joint.relation_residual <= 1e-12);
        assert!(max_diff(joint.w.matrix(joint.group.j), &joint.j_matrix) == 0.0);
        let x = real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let i2 = identity(2);
        let expected = [i2.clone(), x.clone(), z.clone(), &x * &z];
        for m in expected.iter().flat_map(|m| [m.clone(), -m.clone()]) {
            assert!(joint.w.matrices().iter().any(|w| max_diff(w, &m) < 1e-12));
        }
        assert_eq!(verify_joint_irreducible(&joint), JointIrreducibility { commutant_dimension: 1, holds: true });
    }

    #[test]
    fn w_rejects_bad_j() {
        let (ctx, theta, _) = two_bit();
        let g = induced_group(&theta, ctx.k_action()).unwrap();
        let group = build_joint_group(&g, 64).unwrap();
        let u = permutation_representation(&g.action);
        let bad = real_matrix(&[&[1.0, 1.0], &[0.0, 1.0]]);
        assert!(matches!(
            build_w(&group, &u, &bad),
            Err(Error::NotWellDefined { .. } | Error::NotARepresentation { .. })
        ));
        let trivial = trivial_representation(g.group.clone(), 2);
        let joint = build_w(&group, &trivial, &identity(2)).unwrap();
        assert_eq!(verify_joint_irreducible(&joint), JointIrreducibility { commutant_dimension: 4, holds: false });
    }

    #[test]
    fn joint_cosets_two_bit() {
        let (_, joint) = two_bit_joint();
        let cosets = joint_coset_analysis(&joint, &basis_vector(2, 0)).unwrap();
        // W(g h) = -I for the double flip, so the projective isotropy of (1, 0)
        // contains it and |Z| = 8 / 4
        assert_eq!(cosets.system.isotropy().order(), 4);
        assert_eq!(cosets.x_index.len(), 2);
        assert!(!cosets.holds());
        assert!(matches!(joint_coset_structure(&joint, &basis_vector(2, 0)), Err(Error::JointLabelFailure { .. })));
    }

    #[test]
    fn joint_cosets_trivial() {
        let one = GroupAction::regular(Arc::new(FiniteGroup::from_cayley(&[vec![0]]).unwrap()));
        let g = InducedGroup { group: one.group().clone(), action: one.clone(), hom: vec![0] };
        let group = build_joint_group(&g, 8).unwrap();
        let u = permutation_representation(&one);
        let joint = build_w(&group, &u, &build_j(&u).unwrap()).unwrap();
        let cosets = joint_coset_structure(&joint, &basis_vector(1, 0)).unwrap();
        assert_eq!((cosets.x_index.clone(), cosets.y_index.clone()), (vec![0], vec![0]));
    }

    #[test]
    fn joint_operators_two_bit() {
        let (pair, joint) = two_bit_joint();
        let psi0 = basis_vector(2, 0);
        let ops = pair_operators(&pair, &joint, &psi0).unwrap();
        assert!(ops.a_theta.hermitian && ops.a_xi.hermitian);
        assert!(ops.marginal_residual() <= 1e-9);
        let ones = joint_operators(&joint, &psi0, &[1.0, 1.0], &[0.0, 0.0]).unwrap();
        assert!(max_diff(&ones.a_theta.matrix, &identity(2)) <= 1e-12);
        assert!(crate::linalg::max_abs(&ones.a_xi.matrix) <= 1e-12);
        // brute-force oracle: the group sum over the eight matrices
        let mut oracle = CMatrix::zeros(2, 2);
        for n in joint.group.group().elements() {
            let (x, _) = joint.group.split(joint.group.act(n, 0));
            let v = joint.w.matrix(n) * &psi0;
            oracle += outer(&v) * C64::from(x as f64 / 4.0);
        }
        assert!(max_diff(&oracle, &ops.a_theta.matrix) <= 1e-12);
    }

    #[test]
    fn transport() {
        let (pair, joint) = two_bit_joint();
        assert_eq!(transport_element(&pair, &joint, &SWAP).unwrap(), joint.group.j);
        let flip1 = [2, 3, 0, 1];
        assert_eq!(transport_element(&pair, &joint, &flip1).unwrap(), joint.group.g_embed[1]);
        assert_eq!(transport_element(&pair, &joint, &[0, 1, 2, 3]).unwrap(), 0);
        // (a, b) -> (b, 1 - a): the swap followed by a flip of the second coordinate
        let swap_flip = [1, 3, 0, 2];
        let expected = joint.group.group().mul(joint.group.h_embed[1], joint.group.j);
        assert_eq!(transport_element(&pair, &joint, &swap_flip).unwrap(), expected);
        // 3-cycle: xi o t = theta xor xi depends on both coordinates
        assert_eq!(transport_element(&pair, &joint, &[1, 2, 0, 3]).unwrap_err(), Error::UndefinedTransport);
    }
}
