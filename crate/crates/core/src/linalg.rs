//! Small dense complex linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max-norm distance between two matrices of equal shape.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn unitarity_residual(u: &CMatrix) -> f64 {
    max_diff(&(u * u.adjoint()), &identity(u.nrows()))
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    max_diff(m, &m.adjoint())
}

pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn inner(u: &CVector, v: &CVector) -> C64 {
    u.dotc(v)
}

pub fn basis_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = ONE;
    v
}

pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
}

/// Multiplies `v` by a unit phase so that its first component of modulus
/// above `tol` is real and positive.
pub fn canonical_phase(v: &CVector, tol: f64) -> CVector {
    match v.iter().find(|z| z.norm() > tol) {
        Some(z) => {
            let phase = z.conj() / z.norm();
            v * phase
        }
        None => v.clone(),
    }
}

/// Orthonormal basis of the span of the columns of `m`, built greedily by
/// Gram-Schmidt in column order. Columns whose residual norm is at most
/// `tol` times the largest column norm are skipped.
pub fn orthonormal_columns(m: &CMatrix, tol: f64) -> Vec<CVector> {
    let scale = (0..m.ncols()).map(|j| m.column(j).norm()).fold(0.0, f64::max);
    let mut basis: Vec<CVector> = Vec::new();
    if scale == 0.0 {
        return basis;
    }
    for j in 0..m.ncols() {
        let mut v: CVector = m.column(j).into_owned();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let p = b.dotc(&v);
                v -= b * p;
            }
        }
        let n = v.norm();
        if n > tol.max(1e-12) * scale {
            basis.push(canonical_phase(&(v / C64::from(n)), tol));
        }
    }
    basis
}

/// Hermitian eigen-decomposition with eigenvalues sorted ascending.
/// Column `i` of the returned matrix is the eigenvector of eigenvalue `i`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let d = m.nrows();
    if d == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    // symmetrize first so the solver sees an exactly Hermitian input
    let h = (m + m.adjoint()) * C64::from(0.5);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(d, d, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// exp(i * omega * h) for Hermitian `h`, via its eigen-decomposition.
pub fn exp_i_hermitian(h: &CMatrix, omega: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let phases = CVector::from_iterator(values.len(), values.iter().map(|&l| C64::from_polar(1.0, omega * l)));
    &vectors * CMatrix::from_diagonal(&phases) * vectors.adjoint()
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: singular values above `tol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Block-diagonal matrix diag(a, b).
pub fn block_diag(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = CMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// Whether `m` is a multiple of the identity within `tol` (relative to its size).
pub fn is_scalar(m: &CMatrix, tol: f64) -> bool {
    let d = m.nrows();
    if d == 0 {
        return true;
    }
    let mean = m.trace() / C64::from(d as f64);
    max_diff(m, &(identity(d) * mean)) <= tol * max_abs(m).max(1.0)
}
