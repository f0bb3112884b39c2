//! Spectral checks on variable operators: clustered eigensystems,
//! conjugation covariance, values-as-eigenvalues, maximality versus
//! non-degeneracy, question/answer eigenvectors and basis changes.

use crate::coherent::{operator_from_variable, CoherentStateSystem};
use crate::error::{Error, Result};
use crate::linalg::{
    canonical_phase, hermitian_eigen, hermitian_residual, identity, max_diff, outer, CMatrix, CVector, C64,
};
use crate::pairing::{transport_element, JointFrame, JointSystem, RelatedPair};
use crate::repr::Operator;
use crate::variables::{is_maximally_accessible, ConceptualVariable, Context};

/// Distinct eigenvalues (ascending) with an orthonormal basis and the
/// projector of each eigenspace.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub vectors: Vec<Vec<CVector>>,
    pub projectors: Vec<CMatrix>,
    pub tolerance: f64,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.multiplicities.iter().any(|&m| m > 1)
    }

    pub fn first_degeneracy(&self) -> Option<(f64, usize)> {
        self.eigenvalues.iter().zip(&self.multiplicities).find(|(_, &m)| m > 1).map(|(&v, &m)| (v, m))
    }

    /// `sum_i lambda_i P_i`.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.dim();
        self.eigenvalues.iter().zip(&self.projectors).fold(CMatrix::zeros(d, d), |acc, (&v, p)| acc + p * C64::from(v))
    }

    /// Index of the eigenvalue within tolerance of `value`.
    pub fn find(&self, value: f64) -> Option<usize> {
        self.eigenvalues.iter().position(|&v| (v - value).abs() <= self.tolerance)
    }
}

/// Eigenvalues closer than `tolerance` to their neighbour share a cluster.
pub fn eigensystem(operator: &Operator, tolerance: f64) -> Result<EigenSystem> {
    let residual = hermitian_residual(&operator.matrix);
    if residual > tolerance {
        return Err(Error::NotHermitian { residual });
    }
    let (values, vectors) = hermitian_eigen(&operator.matrix);
    let d = values.len();
    let mut system = EigenSystem {
        eigenvalues: Vec::new(),
        multiplicities: Vec::new(),
        vectors: Vec::new(),
        projectors: Vec::new(),
        tolerance,
    };
    let mut i = 0;
    while i < d {
        let mut j = i + 1;
        while j < d && values[j] - values[j - 1] <= tolerance {
            j += 1;
        }
        let basis: Vec<CVector> = (i..j).map(|k| vectors.column(k).into_owned()).collect();
        let basis = if basis.len() == 1 { vec![canonical_phase(&basis[0], tolerance)] } else { basis };
        let projector = basis.iter().fold(CMatrix::zeros(d, d), |acc, v| acc + outer(v));
        system.eigenvalues.push(values[i..j].iter().sum::<f64>() / (j - i) as f64);
        system.multiplicities.push(j - i);
        system.vectors.push(basis);
        system.projectors.push(projector);
        i = j;
    }
    Ok(system)
}

/// `|V^dagger A V - A'|` and whether it is within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceCheck {
    pub residual: f64,
    pub holds: bool,
}

pub fn conjugation_residual(v: &CMatrix, a: &CMatrix, expected: &CMatrix, tolerance: f64) -> CovarianceCheck {
    let residual = max_diff(&(v.adjoint() * a * v), expected);
    CovarianceCheck { residual, holds: residual <= tolerance }
}

/// Single coherent system: `U(g)^dagger A^theta U(g)` against the operator
/// of `x -> theta(g x)`.
pub fn verify_covariance_coherent(system: &CoherentStateSystem, values: &[f64], g: usize) -> Result<CovarianceCheck> {
    let a = operator_from_variable(system, values)?;
    let moved: Vec<f64> = system.coset_transport(g).iter().map(|&z| values[z]).collect();
    let expected = operator_from_variable(system, &moved)?;
    Ok(conjugation_residual(system.rep().matrix(g), &a.matrix, &expected.matrix, system.tolerance()))
}

/// Joint system: for `t` on the inaccessible space, `W(t)^dagger A^f W(t)`
/// against the operator of `f o t`, with `f` on product points.
pub fn verify_covariance_joint(
    pair: &RelatedPair,
    joint: &JointSystem,
    frame: &JointFrame,
    f: &[f64],
    t: &[usize],
) -> Result<CovarianceCheck> {
    let n = transport_element(pair, joint, t)?;
    let a = frame.operator(f, "f")?;
    let moved: Vec<f64> = (0..f.len()).map(|p| f[joint.group.act(n, p)]).collect();
    let expected = frame.operator(&moved, "f o t")?;
    Ok(conjugation_residual(joint.w.matrix(n), &a.matrix, &expected.matrix, joint.tolerance()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCheck {
    pub eigenvalues: Vec<f64>,
    pub values: Vec<f64>,
    pub holds: bool,
}

/// Distinct eigenvalues against the distinct attained numeric values.
pub fn verify_values_are_eigenvalues(eig: &EigenSystem, numeric_values: &[f64]) -> SpectrumCheck {
    let mut values: Vec<f64> = numeric_values.to_vec();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() <= eig.tolerance);
    let holds = values.len() == eig.eigenvalues.len()
        && values.iter().zip(&eig.eigenvalues).all(|(a, b)| (a - b).abs() <= eig.tolerance);
    SpectrumCheck { eigenvalues: eig.eigenvalues.clone(), values, holds }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaximalityCheck {
    pub maximal: bool,
    pub nondegenerate: bool,
    pub holds: bool,
}

/// An inaccessible variable counts as not maximal.
pub fn verify_maximality_iff_nondegenerate(
    context: &Context,
    variable: &ConceptualVariable,
    eig: &EigenSystem,
) -> MaximalityCheck {
    let maximal = is_maximally_accessible(context, variable).unwrap_or(false);
    let nondegenerate = !eig.is_degenerate();
    MaximalityCheck { maximal, nondegenerate, holds: maximal == nondegenerate }
}

/// A sharp answer `variable = value` and its eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct QuestionAnswer {
    pub variable: String,
    pub value_label: String,
    pub eigenvalue: f64,
    pub eigenvector: CVector,
}

/// An eigenspace with the answer label it carries and its rank.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenspaceLabel {
    pub variable: String,
    pub value_label: String,
    pub eigenvalue: f64,
    pub rank: usize,
    pub basis: Vec<CVector>,
}

fn label_for(variable: &ConceptualVariable, value: f64, tol: f64) -> String {
    variable
        .numeric_values()
        .and_then(|nv| nv.iter().position(|&x| (x - value).abs() <= tol))
        .map(|v| variable.value_labels()[v].clone())
        .unwrap_or_else(|| format!("~{value:.9}"))
}

pub fn eigenspace_labels(eig: &EigenSystem, variable: &ConceptualVariable) -> Vec<EigenspaceLabel> {
    eig.eigenvalues
        .iter()
        .zip(&eig.vectors)
        .map(|(&value, basis)| EigenspaceLabel {
            variable: variable.name().to_string(),
            value_label: label_for(variable, value, eig.tolerance),
            eigenvalue: value,
            rank: basis.len(),
            basis: basis.clone(),
        })
        .collect()
}

pub fn question_answer_labels(eig: &EigenSystem, variable: &ConceptualVariable) -> Result<Vec<QuestionAnswer>> {
    if let Some((value, multiplicity)) = eig.first_degeneracy() {
        return Err(Error::DegenerateSpectrum { value, multiplicity });
    }
    Ok(eigenspace_labels(eig, variable)
        .into_iter()
        .map(|l| QuestionAnswer {
            variable: l.variable,
            value_label: l.value_label,
            eigenvalue: l.eigenvalue,
            eigenvector: l.basis[0].clone(),
        })
        .collect())
}

/// `T[j][i] = <a;j|b;i>`, so that `|b;i> = sum_j T[j][i] |a;j>`.
pub fn transition_matrix(a: &EigenSystem, b: &EigenSystem) -> Result<CMatrix> {
    for e in [a, b] {
        if let Some((value, multiplicity)) = e.first_degeneracy() {
            return Err(Error::DegenerateSpectrum { value, multiplicity });
        }
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let d = a.dim();
    Ok(CMatrix::from_fn(d, d, |j, i| a.vectors[j][0].dotc(&b.vectors[i][0])))
}

/// `A_f = sum_j f_j P_j` for `f_j` given per distinct eigenvalue.
pub fn operator_for_coarsening(eig: &EigenSystem, f: &[f64], name: &str) -> Result<Operator> {
    if f.len() != eig.eigenvalues.len() {
        return Err(Error::DimensionMismatch(f.len(), eig.eigenvalues.len()));
    }
    let d = eig.dim();
    let m = f.iter().zip(&eig.projectors).fold(CMatrix::zeros(d, d), |acc, (&v, p)| acc + p * C64::from(v));
    Ok(Operator::new(m, name, eig.tolerance))
}

/// First operator in `family` having `vector` in a one-dimensional
/// eigenspace, with that eigenvalue.
pub fn find_eigen_operator(vector: &CVector, family: &[EigenSystem]) -> Option<(usize, f64)> {
    let norm = vector.norm();
    if norm == 0.0 {
        return None;
    }
    let v = vector / C64::from(norm);
    family.iter().enumerate().find_map(|(i, eig)| {
        eig.vectors.iter().zip(&eig.eigenvalues).find_map(|(basis, &value)| {
            (basis.len() == 1 && basis[0].dotc(&v).norm() >= 1.0 - eig.tolerance).then_some((i, value))
        })
    })
}

/// `|sum_i P_i - I|`, `|A - sum_i lambda_i P_i|` and the largest
/// `|P_i P_j|` for `i != j`.
pub fn eigensystem_residuals(operator: &Operator, eig: &EigenSystem) -> (f64, f64, f64) {
    let d = eig.dim();
    let sum = eig.projectors.iter().fold(CMatrix::zeros(d, d), |acc, p| acc + p);
    let completeness = max_diff(&sum, &identity(d));
    let reconstruction = max_diff(&operator.matrix, &eig.reconstruct());
    let mut orthogonality: f64 = 0.0;
    for (i, p) in eig.projectors.iter().enumerate() {
        for q in &eig.projectors[i + 1..] {
            orthogonality = orthogonality.max(crate::linalg::max_abs(&(p * q)));
        }
    }
    (completeness, reconstruction, orthogonality)
}
