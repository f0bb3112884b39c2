use std::fmt;

use thiserror::Error;

/// Group or action axiom that a table failed, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    /// Table is not square or an entry is out of range.
    Shape {
        row: usize,
        col: usize,
    },
    LatinSquare {
        row: usize,
        col: usize,
    },
    Identity,
    Inverse {
        element: usize,
    },
    Associativity {
        a: usize,
        b: usize,
        c: usize,
    },
    IdentityAction {
        point: usize,
    },
    Compatibility {
        g1: usize,
        g2: usize,
        point: usize,
    },
    /// A row of an action table (or a generator) is not a permutation.
    NotBijective {
        row: usize,
    },
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Shape { row, col } => write!(f, "malformed table at ({row}, {col})"),
            Axiom::LatinSquare { row, col } => {
                write!(f, "latin-square violated at row {row}, column {col}")
            }
            Axiom::Identity => write!(f, "no two-sided identity"),
            Axiom::Inverse { element } => write!(f, "element {element} has no inverse"),
            Axiom::Associativity { a, b, c } => {
                write!(f, "associativity fails for ({a}, {b}, {c})")
            }
            Axiom::IdentityAction { point } => {
                write!(f, "identity does not fix point {point}")
            }
            Axiom::Compatibility { g1, g2, point } => {
                write!(f, "action incompatible with product of {g1} and {g2} at point {point}")
            }
            Axiom::NotBijective { row } => write!(f, "row {row} is not a permutation"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("axiom violation: {0}")]
    AxiomViolation(Axiom),
    #[error("group order {order} exceeds bound {bound}")]
    SizeLimit { order: usize, bound: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("members do not form a subgroup: {0}")]
    NotASubgroup(String),
    #[error("variable `{variable}` is not permissible: k={k}, phi1={phi1}, phi2={phi2}")]
    NotPermissible { variable: String, k: usize, phi1: usize, phi2: usize },
    #[error("variable `{0}` is not accessible in this context")]
    NotAccessible(String),
    #[error("variable `{0}` is not maximally accessible in this context")]
    NotMaximal(String),
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("representation violates {kind} at elements {elements:?} (residual {residual:e})")]
    NotARepresentation { kind: &'static str, elements: Vec<usize>, residual: f64 },
    #[error("representation is irreducible; no proper invariant subspace")]
    IrreducibleInput,
    #[error("overlap {overlap} for element {element} is too close to the isotropy decision boundary")]
    NumericalAmbiguity { element: usize, overlap: f64 },
    #[error("resolution of the identity fails (residual {residual:e})")]
    NoResolution { residual: f64 },
    #[error("xi(phi) != theta(k phi) at phi={phi}")]
    NotRelated { phi: usize },
    #[error("k^2 is not the identity although phi = (theta, xi)")]
    KNotInvolution,
    #[error("group action is not transitive")]
    NotTransitive,
    #[error("group action has a nontrivial isotropy group at point {point}")]
    NontrivialIsotropy { point: usize },
    #[error("W is not well defined at element {element}: words {word_a:?} and {word_b:?} differ by {residual:e}")]
    NotWellDefined { element: usize, word_a: Vec<usize>, word_b: Vec<usize>, residual: f64 },
    #[error("cosets {z1} and {z2} both map to (x, y) = ({x}, {y})")]
    JointLabelFailure { z1: usize, z2: usize, x: usize, y: usize },
    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("transformation has no image in the represented group")]
    UndefinedTransport,
    #[error("spectrum is degenerate (eigenvalue {value:.9} has multiplicity {multiplicity})")]
    DegenerateSpectrum { value: f64, multiplicity: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("invalid spin: 2r = {0}")]
    InvalidSpin(i64),
    #[error("rotation axis is not a unit vector (norm {0})")]
    NonUnitAxis(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
