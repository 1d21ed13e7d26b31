use serde::Serialize;

use super::{BlockValues, RedhefferCoefficients, RedhefferError};
use crate::numeric::{defect_pair, douglas_factor, Complex64, ComplexMatrix, Tolerances};
use crate::schur::{GridPoint, SamplingGrid, SchurFunction};

/// Tolerance for "Φ(e^{it}) is isometric / co-isometric" at a boundary sample.
const POINT_INNER_TOL: f64 = 1e-6;

pub(crate) fn sample_points(grid: &SamplingGrid, with_boundary: bool) -> Vec<GridPoint> {
    let mut pts = grid.interior_points();
    if with_boundary {
        pts.extend(grid.boundary_points());
    }
    pts
}

fn gram_defect(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(m.cols()) - m.adjoint() * m
}

fn cogram_defect(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(m.rows()) - m * m.adjoint()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DifferenceReport {
    pub max_residual: f64,
    pub argmax: Option<Complex64>,
    pub samples: usize,
    pub pass: bool,
}

/// Max over the grid of `‖(R[K₁] - R[K₂]) - Φ₂₁(I - K₁Φ₁₁)^{-1}(K₁ - K₂)(I - Φ₁₁K₂)^{-1}Φ₁₂‖`.
pub fn difference_residual(
    phi: &RedhefferCoefficients,
    k1: &SchurFunction,
    k2: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<DifferenceReport, RedhefferError> {
    phi.require_domain(k1)?;
    phi.require_domain(k2)?;
    let with_boundary = phi.extends_to_boundary() && k1.extends_to_boundary() && k2.extends_to_boundary();
    let mut max_residual = 0.0f64;
    let mut argmax = None;
    let pts = sample_points(grid, with_boundary);
    for p in &pts {
        let z = p.lambda;
        let b = phi.eval_blocks(z)?;
        let (v1, v2) = (k1.eval(z)?, k2.eval(z)?);
        let lhs = b.map(&v1, z)? - b.map(&v2, z)?;
        let rhs = &b.p21 * b.inv_right(&v1, z)? * (&v1 - &v2) * b.inv_left(&v2, z)? * &b.p12;
        let res = (lhs - rhs).norm2();
        if argmax.is_none() || res > max_residual {
            max_residual = res;
            argmax = Some(z);
        }
    }
    Ok(DifferenceReport { max_residual, argmax, samples: pts.len(), pass: max_residual <= tol.tol_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectInequalityReport {
    /// Min eigenvalue of `D²_{R[K]} - Φ₁₂*(I - Φ₁₁K)^{-*} D²_K (I - Φ₁₁K)^{-1} Φ₁₂` over the grid.
    pub min_gap_first: f64,
    /// Min eigenvalue of `D²_{R[K]*} - Φ₂₁(I - KΦ₁₁)^{-1} D²_{K*} (I - KΦ₁₁)^{-*} Φ₂₁*`.
    pub min_gap_second: f64,
    /// Largest `‖LHS - RHS‖` of the first inequality at boundary samples where `Φ` is isometric.
    pub boundary_equality_first: Option<f64>,
    /// Same for the second inequality where `Φ` is co-isometric.
    pub boundary_equality_second: Option<f64>,
    pub samples: usize,
    pub pass: bool,
}

struct Gaps {
    first: ComplexMatrix,
    second: ComplexMatrix,
}

fn defect_gaps(b: &BlockValues, k: &ComplexMatrix, z: Complex64) -> Result<Gaps, RedhefferError> {
    let r = b.map(k, z)?;
    let left = b.inv_left(k, z)? * &b.p12;
    let right = &b.p21 * b.inv_right(k, z)?;
    let first = gram_defect(&r) - left.adjoint() * gram_defect(k) * &left;
    let second = cogram_defect(&r) - &right * cogram_defect(k) * right.adjoint();
    Ok(Gaps { first, second })
}

/// Both defect inequalities of the map at every grid point; at boundary samples where
/// `Φ` is isometric (co-isometric) the first (second) one must be an equality.
pub fn defect_inequality_check(
    phi: &RedhefferCoefficients,
    k: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<DefectInequalityReport, RedhefferError> {
    phi.require_domain(k)?;
    let mut min_first = f64::INFINITY;
    let mut min_second = f64::INFINITY;
    let pts = grid.interior_points();
    for p in &pts {
        let g = defect_gaps(&phi.eval_blocks(p.lambda)?, &k.eval(p.lambda)?, p.lambda)?;
        min_first = min_first.min(g.first.min_eigenvalue());
        min_second = min_second.min(g.second.min_eigenvalue());
    }
    let mut eq_first: Option<f64> = None;
    let mut eq_second: Option<f64> = None;
    let mut boundary = 0;
    if phi.extends_to_boundary() && k.extends_to_boundary() {
        for p in grid.boundary_points() {
            let z = p.lambda;
            let full = phi.assembled().eval(z)?;
            let g = defect_gaps(&phi.eval_blocks(z)?, &k.eval(z)?, z)?;
            min_first = min_first.min(g.first.min_eigenvalue());
            min_second = min_second.min(g.second.min_eigenvalue());
            if gram_defect(&full).norm2() <= POINT_INNER_TOL {
                eq_first = Some(eq_first.unwrap_or(0.0).max(g.first.norm2()));
            }
            if cogram_defect(&full).norm2() <= POINT_INNER_TOL {
                eq_second = Some(eq_second.unwrap_or(0.0).max(g.second.norm2()));
            }
            boundary += 1;
        }
    }
    let eq_ok = |e: Option<f64>| e.map_or(true, |v| v <= POINT_INNER_TOL);
    let pass = min_first >= -tol.tol_residual
        && min_second >= -tol.tol_residual
        && eq_ok(eq_first)
        && eq_ok(eq_second);
    Ok(DefectInequalityReport {
        min_gap_first: min_first,
        min_gap_second: min_second,
        boundary_equality_first: eq_first,
        boundary_equality_second: eq_second,
        samples: pts.len() + boundary,
        pass,
    })
}

/// `L` with `L D_{R[K]} = D_K (I - Φ₁₁K)^{-1} Φ₁₂` and `L_*` with
/// `D_{R[K]*} L_* = Φ₂₁ (I - KΦ₁₁)^{-1} D_{K*}`, both minimal-norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LFactors {
    pub l: ComplexMatrix,
    pub l_star: ComplexMatrix,
    pub residual_l: f64,
    pub residual_l_star: f64,
    /// `R_Φ[K](λ)`.
    #[serde(skip)]
    pub r: ComplexMatrix,
}

pub fn factor_l_lstar(
    phi: &RedhefferCoefficients,
    k: &SchurFunction,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<LFactors, RedhefferError> {
    phi.require_domain(k)?;
    factors_at(&phi.eval_blocks(lambda)?, &k.eval(lambda)?, lambda, tol)
}

pub(crate) fn factors_at(
    b: &BlockValues,
    k: &ComplexMatrix,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<LFactors, RedhefferError> {
    let r = b.map(k, lambda)?;
    let dk = defect_pair(k, tol)?;
    let dr = defect_pair(&r, tol)?;
    let t = &dk.d * b.inv_left(k, lambda)? * &b.p12;
    let t_star = &b.p21 * b.inv_right(k, lambda)? * &dk.d_star;
    let fail = |source| RedhefferError::Factor { lambda, source };
    let l = douglas_factor(&t, &dr.d, tol).map_err(fail)?;
    let l_star = douglas_factor(&t_star.adjoint(), &dr.d_star, tol).map_err(fail)?.adjoint();
    Ok(LFactors {
        residual_l: (&l * &dr.d - &t).norm2(),
        residual_l_star: (&dr.d_star * &l_star - &t_star).norm2(),
        l,
        l_star,
        r,
    })
}
