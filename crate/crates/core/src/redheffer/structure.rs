use serde::Serialize;

use super::identities::sample_points;
use super::{RedhefferCoefficients, RedhefferError, INVERTIBILITY_COND_CAP};
use crate::numeric::{defect_pair, Complex64, ComplexMatrix, Tolerances};
use crate::schur::{GridPoint, SamplingGrid, SchurError, SchurFunction};

/// Tolerance for the inner / *-inner verdicts.
pub const INNER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerReport {
    /// Max of `‖F(e^{it})*F(e^{it}) - I‖`.
    pub inner_defect: f64,
    /// Max of `‖F(e^{it})F(e^{it})* - I‖`.
    pub co_inner_defect: f64,
    pub inner: bool,
    pub co_inner: bool,
    pub samples: usize,
}

impl InnerReport {
    pub fn two_sided(&self) -> bool {
        self.inner && self.co_inner
    }
}

pub fn inner_check(f: &SchurFunction, boundary_angles: usize) -> Result<InnerReport, SchurError> {
    if !f.extends_to_boundary() {
        return Err(SchurError::Invalid("inner check needs a function that extends to the circle".into()));
    }
    if boundary_angles == 0 {
        return Err(SchurError::BadGrid("need at least one boundary angle".into()));
    }
    let mut inner_defect = 0.0f64;
    let mut co_inner_defect = 0.0f64;
    for k in 0..boundary_angles {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / boundary_angles as f64);
        let v = f.eval(z)?;
        inner_defect = inner_defect.max((v.adjoint() * &v - ComplexMatrix::identity(v.cols())).norm2());
        co_inner_defect = co_inner_defect.max((&v * v.adjoint() - ComplexMatrix::identity(v.rows())).norm2());
    }
    Ok(InnerReport {
        inner_defect,
        co_inner_defect,
        inner: inner_defect <= INNER_TOL,
        co_inner: co_inner_defect <= INNER_TOL,
        samples: boundary_angles,
    })
}

/// Which off-diagonal block of `Φ` is boundedly invertible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Phi12,
    Phi21,
}

/// First block among `Φ₁₂`, `Φ₂₁` that is square with condition number below the cap at
/// every sample, with its worst condition number.
pub(crate) fn invertible_branch(
    phi: &RedhefferCoefficients,
    points: &[GridPoint],
) -> Result<(Branch, f64), RedhefferError> {
    let b = phi.blocks();
    let mut worst = Vec::new();
    for (branch, block) in [(Branch::Phi12, &b.phi12), (Branch::Phi21, &b.phi21)] {
        if block.in_dim() != block.out_dim() {
            worst.push(format!("{branch:?} is {}x{}", block.out_dim(), block.in_dim()));
            continue;
        }
        let mut max_cond = 0.0f64;
        for p in points {
            max_cond = max_cond.max(block.eval(p.lambda)?.condition_number());
            if !(max_cond < INVERTIBILITY_COND_CAP) {
                break;
            }
        }
        if max_cond < INVERTIBILITY_COND_CAP {
            return Ok((branch, max_cond));
        }
        worst.push(format!("{branch:?} condition number {max_cond:.3e}"));
    }
    Err(RedhefferError::HypothesisUnmet(format!(
        "neither Φ₁₂ nor Φ₂₁ is invertible below condition {INVERTIBILITY_COND_CAP:e}: {}",
        worst.join(", ")
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionPoint {
    pub lambda: Complex64,
    pub boundary: bool,
    /// `rank D_F` (`Φ₁₂` branch) or `rank D_{F*}` (`Φ₂₁` branch).
    pub rank_f: usize,
    /// `rank D_{R[F]}` or `rank D_{R[F]*}`.
    pub rank_r: usize,
    /// `rank_f <= rank_r` and `dim 𝓤 - rank_r <= dim 𝓔 - rank_f` (resp. `𝓨`, `𝓔'`).
    pub holds: bool,
    /// Set at boundary samples where `Φ` is inner (resp. *-inner): whether the ranks agree.
    pub equality: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub branch: Branch,
    pub max_condition: f64,
    pub points: Vec<DimensionPoint>,
    pub pass: bool,
}

/// Defect-dimension comparison between `F` and `R_Φ[F]` when `Φ₁₂` or `Φ₂₁` is invertible.
pub fn dimension_monotonicity(
    phi: &RedhefferCoefficients,
    f: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<DimensionReport, RedhefferError> {
    phi.require_domain(f)?;
    let with_boundary = phi.extends_to_boundary() && f.extends_to_boundary();
    let pts = sample_points(grid, with_boundary);
    let (branch, max_condition) = invertible_branch(phi, &pts)?;
    let (e, e_prime, u, y) = phi.dims();
    let (dim_f, dim_r) = match branch {
        Branch::Phi12 => (e, u),
        Branch::Phi21 => (e_prime, y),
    };
    let mut points = Vec::with_capacity(pts.len());
    for p in &pts {
        let z = p.lambda;
        let b = phi.eval_blocks(z)?;
        let k = f.eval(z)?;
        let (df, dr) = (defect_pair(&k, tol)?, defect_pair(&b.map(&k, z)?, tol)?);
        let (rank_f, rank_r) = match branch {
            Branch::Phi12 => (df.rank, dr.rank),
            Branch::Phi21 => (df.rank_star, dr.rank_star),
        };
        let boundary = z.norm() >= 1.0;
        let equality = if boundary {
            let full = phi.assembled().eval(z)?;
            let d = match branch {
                Branch::Phi12 => full.adjoint() * &full - ComplexMatrix::identity(full.cols()),
                Branch::Phi21 => &full * full.adjoint() - ComplexMatrix::identity(full.rows()),
            };
            (d.norm2() <= INNER_TOL).then_some(rank_f == rank_r)
        } else {
            None
        };
        points.push(DimensionPoint {
            lambda: z,
            boundary,
            rank_f,
            rank_r,
            holds: rank_f <= rank_r && dim_r - rank_r <= dim_f - rank_f,
            equality,
        });
    }
    let pass = points.iter().all(|p| p.holds && p.equality != Some(false));
    Ok(DimensionReport { branch, max_condition, points, pass })
}
