//! Spin-`r` angular momentum matrices in the basis `|r; m>`, `m = -r..r`
//! ascending, with rotations, spin coherent states and the discretised
//! in-plane spin components used for permissibility checks.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::group::{cyclic_shift_action, generate_permutation_group, GroupAction, DEFAULT_ORDER_BOUND};
use crate::linalg::{basis_vector, exp_i_hermitian, hermitian_eigen, identity, max_diff, CMatrix, CVector, C64};
use crate::variables::{is_permissible, ConceptualVariable, Context, Permissibility};

/// Largest supported `2r`.
pub const MAX_TWO_R: i64 = 25;

/// Tolerance for unit axes and level-set equality on the circle grid.
pub const AXIS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct SpinRepresentation {
    two_r: i64,
    pub ax: CMatrix,
    pub ay: CMatrix,
    pub az: CMatrix,
    pub a_plus: CMatrix,
    pub a_minus: CMatrix,
    pub a_sq: CMatrix,
}

impl SpinRepresentation {
    pub fn two_r(&self) -> i64 {
        self.two_r
    }

    pub fn r(&self) -> f64 {
        self.two_r as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_r as usize + 1
    }

    /// `m` of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        i as f64 - self.r()
    }

    pub fn is_half_integer(&self) -> bool {
        self.two_r % 2 == 1
    }

    /// `n . A`
    pub fn component(&self, n: [f64; 3]) -> CMatrix {
        &self.ax * C64::from(n[0]) + &self.ay * C64::from(n[1]) + &self.az * C64::from(n[2])
    }
}

/// Parses `"3/2"`, `"2"` or `"1.5"` into `2r`; `r` must be non-negative.
pub fn parse_spin(text: &str) -> Result<i64> {
    let text = text.trim();
    let bad = || Error::InvalidArgument(format!("`{text}` is not a spin value"));
    let two_r = if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        match den.trim() {
            "2" => Some(num),
            "1" => num.checked_mul(2),
            _ => return Err(bad()),
        }
    } else if let Ok(n) = text.parse::<i64>() {
        n.checked_mul(2)
    } else {
        let x: f64 = text.parse().map_err(|_| bad())?;
        let doubled = 2.0 * x;
        (doubled.is_finite() && doubled == doubled.round() && doubled.abs() < 1e15).then_some(doubled as i64)
    };
    match two_r {
        Some(v) if v >= 0 => Ok(v),
        _ => Err(bad()),
    }
}

/// Condon-Shortley matrices: `A+ |m> = sqrt(r(r+1) - m(m+1)) |m+1>`,
/// `Ax = (A+ + A-)/2`, `Ay = (A+ - A-)/(2i)`.
pub fn build_spin(two_r: i64) -> Result<SpinRepresentation> {
    if !(0..=MAX_TWO_R).contains(&two_r) {
        return Err(Error::InvalidSpin(two_r));
    }
    let d = two_r as usize + 1;
    let r = two_r as f64 / 2.0;
    let mut a_plus = CMatrix::zeros(d, d);
    for i in 0..d - 1 {
        let m = i as f64 - r;
        a_plus[(i + 1, i)] = C64::from((r * (r + 1.0) - m * (m + 1.0)).sqrt());
    }
    let a_minus = a_plus.adjoint();
    let az = CMatrix::from_diagonal(&CVector::from_iterator(d, (0..d).map(|i| C64::from(i as f64 - r))));
    let ax = (&a_plus + &a_minus) * C64::from(0.5);
    let ay = (&a_plus - &a_minus) * C64::new(0.0, -0.5);
    let a_sq = &ax * &ax + &ay * &ay + &az * &az;
    Ok(SpinRepresentation { two_r, ax, ay, az, a_plus, a_minus, a_sq })
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Max residual of `[A0, A+-] = +-A+-` and `[A-, A+] = -2 A0`.
pub fn verify_commutation(sr: &SpinRepresentation) -> f64 {
    let up = max_diff(&commutator(&sr.az, &sr.a_plus), &sr.a_plus);
    let down = max_diff(&commutator(&sr.az, &sr.a_minus), &(-sr.a_minus.clone()));
    let ladder = max_diff(&commutator(&sr.a_minus, &sr.a_plus), &(&sr.az * C64::from(-2.0)));
    up.max(down).max(ladder)
}

/// Per basis vector: `A0 |m>` and `A^2 |m>` as multiples of `|m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenRelations {
    /// `(m, r(r+1))` per basis index.
    pub expected: Vec<(f64, f64)>,
    /// Largest deviation of `A0 |m> - m |m>`.
    pub a0_residual: f64,
    /// Largest deviation of `A^2 |m> - r(r+1) |m>`.
    pub casimir_residual: f64,
}

impl EigenRelations {
    pub fn holds(&self, tolerance: f64) -> bool {
        self.a0_residual == 0.0 && self.casimir_residual <= tolerance
    }
}

pub fn verify_eigen(sr: &SpinRepresentation) -> EigenRelations {
    let r = sr.r();
    let casimir = r * (r + 1.0);
    let mut expected = Vec::new();
    let mut a0_residual: f64 = 0.0;
    let mut casimir_residual: f64 = 0.0;
    for i in 0..sr.dim() {
        let e = basis_vector(sr.dim(), i);
        let m = sr.m(i);
        a0_residual = a0_residual.max((&sr.az * &e - &e * C64::from(m)).camax());
        casimir_residual = casimir_residual.max((&sr.a_sq * &e - &e * C64::from(casimir)).camax());
        expected.push((m, casimir));
    }
    EigenRelations { expected, a0_residual, casimir_residual }
}

fn check_unit(n: [f64; 3]) -> Result<()> {
    let norm = n.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > AXIS_TOLERANCE {
        return Err(Error::NonUnitAxis(norm));
    }
    Ok(())
}

/// `exp(i omega n . A)`.
pub fn rotation_operator(sr: &SpinRepresentation, n: [f64; 3], omega: f64) -> Result<CMatrix> {
    check_unit(n)?;
    Ok(exp_i_hermitian(&sr.component(n), omega))
}

/// `|r; -r>` turned from `-z` onto `n` along the great circle, i.e.
/// `exp(-i omega a . A)` with `a = (-z) x n / |(-z) x n|`; `+z` is reached
/// about the x axis.
pub fn spin_coherent_state(sr: &SpinRepresentation, n: [f64; 3]) -> Result<CVector> {
    check_unit(n)?;
    let lowest = basis_vector(sr.dim(), 0);
    let cross = [n[1], -n[0], 0.0];
    let s = (cross[0] * cross[0] + cross[1] * cross[1]).sqrt();
    let omega = (-n[2]).clamp(-1.0, 1.0).acos();
    let axis = if s > AXIS_TOLERANCE {
        [cross[0] / s, cross[1] / s, 0.0]
    } else if n[2] < 0.0 {
        return Ok(lowest);
    } else {
        [1.0, 0.0, 0.0]
    };
    Ok(exp_i_hermitian(&sr.component(axis), -omega) * lowest)
}

/// `<v| n.A |v>` components for a unit `v`.
pub fn expectation(sr: &SpinRepresentation, v: &CVector) -> [f64; 3] {
    [&sr.ax, &sr.ay, &sr.az].map(|a| v.dotc(&(a * v)).re)
}

/// Largest deviation of the spectrum of `n . A` from `-r..r`.
pub fn spectrum_residual(sr: &SpinRepresentation, n: [f64; 3]) -> f64 {
    let (values, _) = hermitian_eigen(&sr.component(n));
    values.iter().enumerate().map(|(i, &v)| (v - sr.m(i)).abs()).fold(0.0, f64::max)
}

/// Rank of the real span of `{I, 2Ax, 2Az}` inside real symmetric 2x2
/// matrices, with each matrix read as `(a11, a12, a22)`.
pub fn real_symmetric_span_rank(sr: &SpinRepresentation) -> usize {
    if sr.dim() != 2 {
        return 0;
    }
    let rows: Vec<[f64; 3]> = [identity(2), &sr.ax * C64::from(2.0), &sr.az * C64::from(2.0)]
        .iter()
        .map(|m| [m[(0, 0)].re, m[(0, 1)].re, m[(1, 1)].re])
        .collect();
    let m = nalgebra::Matrix3::from_fn(|i, j| rows[i][j]);
    m.rank(1e-12)
}

/// Points `(cos t_i, 0, sin t_i)` with `t_i = 2 pi i / n`, the cyclic
/// rotation group, and one variable `theta^a(p) = p . a` per grid
/// direction `a`.
#[derive(Debug, Clone)]
pub struct SternGerlach {
    pub points: Vec<[f64; 3]>,
    pub context: Context,
}

pub fn circle_point(i: usize, n: usize) -> [f64; 3] {
    let t = 2.0 * PI * i as f64 / n as f64;
    [t.cos(), 0.0, t.sin()]
}

pub fn stern_gerlach_context(n: usize) -> Result<SternGerlach> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 directions, got {n}")));
    }
    let points: Vec<[f64; 3]> = (0..n).map(|i| circle_point(i, n)).collect();
    let family = (0..n)
        .map(|j| {
            let a = points[j];
            let raw: Vec<f64> = points.iter().map(|p| p[0] * a[0] + p[1] * a[1] + p[2] * a[2]).collect();
            ConceptualVariable::from_numeric(format!("theta_{j}"), &raw, AXIS_TOLERANCE)
        })
        .collect::<Result<Vec<_>>>()?;
    let context = Context::new(cyclic_shift_action(n)?, family)?;
    Ok(SternGerlach { points, context })
}

/// Permissibility of every in-plane component under the rotation group.
pub fn in_plane_permissibility(n: usize) -> Result<Vec<(String, Permissibility)>> {
    let sg = stern_gerlach_context(n)?;
    sg.context.family().iter().map(|v| Ok((v.name().to_string(), is_permissible(v, sg.context.k_action())?))).collect()
}

/// Signed axes in the order `+x, -x, +y, -y, +z, -z`.
pub const SIGNED_AXES: [&str; 6] = ["+x", "-x", "+y", "-y", "+z", "-z"];

/// Quarter turns about `x` and `y` as permutations of [`SIGNED_AXES`].
pub const QUARTER_X: [usize; 6] = [0, 1, 4, 5, 3, 2];
pub const QUARTER_Y: [usize; 6] = [5, 4, 2, 3, 0, 1];

/// The rotation group of the cube on the signed axes, generated by
/// [`QUARTER_X`] (element 1) and [`QUARTER_Y`] (element 2).
pub fn octahedral_action() -> Result<GroupAction> {
    Ok(generate_permutation_group(6, &[QUARTER_X.to_vec(), QUARTER_Y.to_vec()], DEFAULT_ORDER_BOUND)?.action)
}

/// Axis component `theta^a` on the signed axes, `a` in `0..3`.
pub fn axis_component(axis: usize) -> Result<ConceptualVariable> {
    let raw: Vec<f64> = (0..6)
        .map(|p| {
            if p / 2 == axis {
                if p % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                0.0
            }
        })
        .collect();
    ConceptualVariable::from_numeric(["theta_x", "theta_y", "theta_z"][axis], &raw, AXIS_TOLERANCE)
}

#[derive(Debug, Clone)]
pub struct RotationCounterexample {
    pub action: GroupAction,
    pub theta_z: Permissibility,
    pub theta_x: Permissibility,
}

pub fn full_rotation_counterexample() -> Result<RotationCounterexample> {
    let action = octahedral_action()?;
    let theta_z = is_permissible(&axis_component(2)?, &action)?;
    let theta_x = is_permissible(&axis_component(0)?, &action)?;
    Ok(RotationCounterexample { action, theta_z, theta_x })
}
