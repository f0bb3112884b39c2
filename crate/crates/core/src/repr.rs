//! Unitary representations of finite groups, commutants, irreducibility
//! and invariant-subspace extraction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupAction};
use crate::linalg::{
    self, c, hermitian_eigen, identity, is_scalar, kron, max_diff, orthonormal_columns, outer, CMatrix, CVector, C64,
    ONE, ZERO,
};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// `g -> U(g)`, one `dim x dim` unitary matrix per group element.
#[derive(Debug, Clone)]
pub struct UnitaryRepresentation {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<CMatrix>,
    tolerance: f64,
}

/// Largest deviation from each representation axiom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationResiduals {
    pub identity: f64,
    pub homomorphism: f64,
    pub unitarity: f64,
}

impl RepresentationResiduals {
    pub fn max(&self) -> f64 {
        self.identity.max(self.homomorphism).max(self.unitarity)
    }
}

impl UnitaryRepresentation {
    /// Checks `U(e) = I`, unitarity, and `U(g1 g2) = U(g1) U(g2)` for all
    /// pairs, each within `tolerance`.
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>, tolerance: f64) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch(matrices.len(), group.order()));
        }
        let dim = matrices[0].nrows();
        if let Some(m) = matrices.iter().find(|m| m.nrows() != dim || m.ncols() != dim) {
            return Err(Error::DimensionMismatch(m.nrows(), dim));
        }
        let rep = Self { group, dim, matrices, tolerance };
        let e = rep.group.identity();
        let r = max_diff(&rep.matrices[e], &identity(dim));
        if r > tolerance {
            return Err(Error::NotARepresentation { kind: "identity", elements: vec![e], residual: r });
        }
        for g in rep.group.elements() {
            let r = linalg::unitarity_residual(&rep.matrices[g]);
            if r > tolerance {
                return Err(Error::NotARepresentation { kind: "unitarity", elements: vec![g], residual: r });
            }
        }
        for a in rep.group.elements() {
            for b in rep.group.elements() {
                let r = max_diff(&rep.matrices[rep.group.mul(a, b)], &(&rep.matrices[a] * &rep.matrices[b]));
                if r > tolerance {
                    return Err(Error::NotARepresentation { kind: "homomorphism", elements: vec![a, b], residual: r });
                }
            }
        }
        Ok(rep)
    }

    /// For matrices that are a homomorphic image by construction.
    pub(crate) fn from_trusted(group: Arc<FiniteGroup>, matrices: Vec<CMatrix>, tolerance: f64) -> Self {
        let dim = matrices.first().map_or(0, |m| m.nrows());
        Self { group, dim, matrices, tolerance }
    }

    pub fn residuals(&self) -> RepresentationResiduals {
        let e = self.group.identity();
        let identity_r = max_diff(&self.matrices[e], &identity(self.dim));
        let unitarity = self.matrices.iter().map(linalg::unitarity_residual).fold(0.0, f64::max);
        let mut homomorphism: f64 = 0.0;
        for a in self.group.elements() {
            for b in self.group.elements() {
                let r = max_diff(&self.matrices[self.group.mul(a, b)], &(&self.matrices[a] * &self.matrices[b]));
                homomorphism = homomorphism.max(r);
            }
        }
        RepresentationResiduals { identity: identity_r, homomorphism, unitarity }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &CMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// The representation `B^dagger U(g) B` on the span of an orthonormal
    /// `basis`; fails unless the span is invariant.
    pub fn restrict(&self, basis: &[CVector]) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidArgument("empty basis".into()));
        }
        let b = CMatrix::from_columns(basis);
        let matrices = self.matrices.iter().map(|u| b.adjoint() * u * &b).collect();
        Self::new(self.group.clone(), matrices, self.tolerance)
    }
}

/// `U(g)[g x][x] = 1`.
pub fn permutation_representation(action: &GroupAction) -> UnitaryRepresentation {
    let m = action.space_size();
    let matrices = action
        .group()
        .elements()
        .map(|g| {
            let mut u = CMatrix::zeros(m, m);
            for x in 0..m {
                u[(action.act(g, x), x)] = ONE;
            }
            u
        })
        .collect();
    UnitaryRepresentation::from_trusted(action.group().clone(), matrices, DEFAULT_TOLERANCE)
}

/// `(U(g) f)(x) = f(g^-1 x)` on functions over the group.
pub fn regular_representation(group: &Arc<FiniteGroup>, bound: usize) -> Result<UnitaryRepresentation> {
    if group.order() > bound {
        return Err(Error::SizeLimit { order: group.order(), bound });
    }
    Ok(permutation_representation(&GroupAction::regular(group.clone())))
}

/// One-dimensional representation from a character table `chi[g]`.
pub fn one_dimensional(group: Arc<FiniteGroup>, chi: &[C64]) -> Result<UnitaryRepresentation> {
    let matrices = chi.iter().map(|&z| CMatrix::from_element(1, 1, z)).collect();
    UnitaryRepresentation::new(group, matrices, DEFAULT_TOLERANCE)
}

pub fn trivial_representation(group: Arc<FiniteGroup>, dim: usize) -> UnitaryRepresentation {
    let matrices = vec![identity(dim); group.order()];
    UnitaryRepresentation::from_trusted(group, matrices, DEFAULT_TOLERANCE)
}

/// Closure of a set of unitary matrices under multiplication, returned as
/// a representation of the abstract group it generates (elements in
/// breadth-first discovery order, identity first) together with the
/// element index of each generator.
pub fn generate_matrix_group(
    generators: &[CMatrix],
    tolerance: f64,
    bound: usize,
) -> Result<(UnitaryRepresentation, Vec<usize>)> {
    let d = generators.first().map(|g| g.nrows()).ok_or_else(|| Error::InvalidArgument("no generators".into()))?;
    for g in generators {
        if g.nrows() != d || g.ncols() != d {
            return Err(Error::DimensionMismatch(g.nrows(), d));
        }
        let r = linalg::unitarity_residual(g);
        if r > tolerance {
            return Err(Error::NotARepresentation { kind: "unitarity", elements: vec![], residual: r });
        }
    }
    let find = |elements: &[CMatrix], m: &CMatrix| elements.iter().position(|x| max_diff(x, m) <= tolerance);
    let mut elements = vec![identity(d)];
    let mut next = 0;
    while next < elements.len() {
        for g in generators {
            let prod = &elements[next] * g;
            if find(&elements, &prod).is_none() {
                if elements.len() == bound {
                    return Err(Error::SizeLimit { order: bound + 1, bound });
                }
                elements.push(prod);
            }
        }
        next += 1;
    }
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            table.push(find(&elements, &(a * b)).ok_or(Error::NotARepresentation {
                kind: "closure",
                elements: vec![],
                residual: f64::INFINITY,
            })?);
        }
    }
    let group = Arc::new(FiniteGroup::from_trusted_table(n, table));
    let gens = generators.iter().map(|g| find(&elements, g).unwrap()).collect();
    let rep = UnitaryRepresentation::new(group, elements, tolerance)?;
    Ok((rep, gens))
}

pub fn direct_sum(r1: &UnitaryRepresentation, r2: &UnitaryRepresentation) -> Result<UnitaryRepresentation> {
    if r1.group() != r2.group() {
        return Err(Error::GroupMismatch);
    }
    let matrices = r1.matrices().iter().zip(r2.matrices()).map(|(a, b)| linalg::block_diag(a, b)).collect();
    Ok(UnitaryRepresentation::from_trusted(r1.group().clone(), matrices, r1.tolerance().max(r2.tolerance())))
}

/// Group-averaging projector `X -> |G|^-1 sum_g U(g) X U(g)^dagger` as a
/// `d^2 x d^2` matrix on row-major vectorised `X`. Its range is exactly the
/// solution space of `X U(g) = U(g) X` for all `g`.
pub fn averaging_projector(rep: &UnitaryRepresentation) -> CMatrix {
    let d = rep.dim();
    let mut s = CMatrix::zeros(d * d, d * d);
    for u in rep.matrices() {
        s += kron(u, &u.map(|z| z.conj()));
    }
    s / C64::from(rep.group().order() as f64)
}

fn unvec(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| v[i * d + j])
}

/// Basis of the commutant: the first linearly independent images
/// `P(E_ij)` of matrix units under the averaging projector, in row-major
/// `(i, j)` order.
pub fn commutant_basis(rep: &UnitaryRepresentation) -> Vec<CMatrix> {
    let d = rep.dim();
    let p = averaging_projector(rep);
    let rank = linalg::numerical_rank(&p, rep.tolerance());
    let mut ortho: Vec<CVector> = Vec::new();
    let mut basis = Vec::new();
    for k in 0..p.ncols() {
        if basis.len() == rank {
            break;
        }
        let col: CVector = p.column(k).into_owned();
        let mut v = col.clone();
        for _ in 0..2 {
            for b in &ortho {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let n = v.norm();
        if n > 1e-6 * col.norm().max(1e-300) && n > 1e-12 {
            ortho.push(v / C64::from(n));
            basis.push(unvec(&col, d));
        }
    }
    basis
}

/// Dimension of `{X : X U(g) = U(g) X for all g}`, via the numerical rank
/// of the averaging projector (threshold `tolerance * sigma_max`).
pub fn commutant_dimension(rep: &UnitaryRepresentation) -> usize {
    linalg::numerical_rank(&averaging_projector(rep), rep.tolerance())
}

pub fn is_irreducible(rep: &UnitaryRepresentation) -> bool {
    commutant_dimension(rep) == 1
}

/// Eigenspaces of a Hermitian commutant element, ascending by eigenvalue.
/// Each block spans an invariant subspace; `blocks[0]` is `H0` and
/// `blocks[1]` is `H0'`.
#[derive(Debug, Clone)]
pub struct InvariantSplit {
    pub commutant_element: CMatrix,
    pub eigenvalues: Vec<f64>,
    pub blocks: Vec<Vec<CVector>>,
}

impl InvariantSplit {
    pub fn h0(&self) -> &[CVector] {
        &self.blocks[0]
    }

    pub fn h0_prime(&self) -> &[CVector] {
        &self.blocks[1]
    }

    /// Orthogonal projector onto block `i`.
    pub fn projector(&self, i: usize) -> CMatrix {
        let d = self.commutant_element.nrows();
        self.blocks[i].iter().fold(CMatrix::zeros(d, d), |acc, v| acc + outer(v))
    }
}

/// Hermitian, non-scalar element of the commutant: the Hermitian part of
/// the first basis element for which it is non-scalar; failing that, the
/// first non-scalar anti-Hermitian part times `-i`.
fn hermitian_commutant_element(rep: &UnitaryRepresentation) -> Option<CMatrix> {
    let basis = commutant_basis(rep);
    let half = C64::from(0.5);
    let tol = rep.tolerance();
    basis
        .iter()
        .map(|x| (x + x.adjoint()) * half)
        .find(|h| !is_scalar(h, tol))
        .or_else(|| basis.iter().map(|x| (x - x.adjoint()) * c(0.0, -0.5)).find(|h| !is_scalar(h, tol)))
}

pub fn invariant_subspace_split(rep: &UnitaryRepresentation) -> Result<InvariantSplit> {
    if is_irreducible(rep) {
        return Err(Error::IrreducibleInput);
    }
    let h = hermitian_commutant_element(rep).ok_or(Error::IrreducibleInput)?;
    let (values, vectors) = hermitian_eigen(&h);
    let tol = rep.tolerance();
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut eigenvalues = Vec::new();
    let mut blocks = Vec::new();
    let d = rep.dim();
    let mut i = 0;
    while i < d {
        let mut j = i + 1;
        while j < d && values[j] - values[i] <= tol * scale {
            j += 1;
        }
        let projector = (i..j).fold(CMatrix::zeros(d, d), |acc, k| acc + outer(&vectors.column(k).into_owned()));
        eigenvalues.push(values[i..j].iter().sum::<f64>() / (j - i) as f64);
        blocks.push(orthonormal_columns(&projector, tol));
        i = j;
    }
    Ok(InvariantSplit { commutant_element: h, eigenvalues, blocks })
}

/// A matrix attached to a variable; `hermitian` is computed at build time.
#[derive(Debug, Clone)]
pub struct Operator {
    pub matrix: CMatrix,
    pub hermitian: bool,
    pub source_variable: String,
}

impl Operator {
    pub fn new(matrix: CMatrix, source_variable: impl Into<String>, tolerance: f64) -> Self {
        let hermitian = linalg::hermitian_residual(&matrix) <= tolerance;
        Self { matrix, hermitian, source_variable: source_variable.into() }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// `c * identity`
pub fn scalar_matrix(d: usize, value: f64) -> CMatrix {
    identity(d) * C64::from(value)
}

/// Zero `d x d` matrix.
pub fn zero_matrix(d: usize) -> CMatrix {
    CMatrix::from_element(d, d, ZERO)
}
