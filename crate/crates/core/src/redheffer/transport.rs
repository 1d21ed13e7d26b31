use serde::Serialize;

use super::identities::{factors_at, sample_points};
use super::structure::{inner_check, invertible_branch};
use super::{RedhefferCoefficients, RedhefferError, TOL_DOMAIN};
use crate::numeric::{defect_pair, sandwich_solve, Complex64, ComplexMatrix, NumericError, Tolerances};
use crate::preorder::{check_preceq, Contraction, PreorderError};
use crate::schur::{
    classify_equiv_infty, classify_preceq_infty, GridPoint, SamplingGrid, SchurError, SchurFunction, Verdict,
};

/// Ceiling on `‖(I - F(λ)Φ₁₁(λ))^{-1}‖` standing in for bounded invertibility on the disc.
pub const INVERSE_NORM_CAP: f64 = 1e8;
/// Agreement required between recovered and direct boundary witnesses.
pub const PULLBACK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPoint {
    pub radius: f64,
    pub angle: f64,
    pub lambda: Complex64,
    pub norm_l: f64,
    pub norm_l_star: f64,
    /// Norm of the transported witness.
    pub norm_witness: f64,
    /// Norm of the input witness (`Q̃` or `Q`).
    pub norm_input: f64,
    /// `‖(R[F₁] - R[F₂]) - D_{R*} W D_R‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportCertificate {
    pub points: Vec<TransportPoint>,
    pub sup_transported: f64,
    pub input_sup: f64,
    pub max_residual: f64,
    /// `‖Φ₁₁(0)F(0)‖` for the two inputs.
    pub domain_norms: (f64, f64),
    /// `sup ‖N‖` (pre-order transport only).
    pub sup_n: Option<f64>,
    /// `sup ‖(I - FΦ₁₁)^{-1}‖` (pre-order transport only).
    pub max_inverse_norm: Option<f64>,
    pub pass: bool,
}

fn refuse_at(lambda: Complex64, what: &str, residual: f64) -> RedhefferError {
    RedhefferError::Refused(format!("{what} at λ = {lambda} (residual {residual:.3e})"))
}

fn in_domain(norm: f64) -> bool {
    norm < 1.0 - TOL_DOMAIN
}

fn summarize(
    points: Vec<TransportPoint>,
    domain_norms: (f64, f64),
    sup_n: Option<f64>,
    max_inverse_norm: Option<f64>,
    tol: &Tolerances,
    compare_sups: bool,
) -> TransportCertificate {
    let fold = |f: fn(&TransportPoint) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let sup_transported = fold(|p| p.norm_witness);
    let input_sup = fold(|p| p.norm_input);
    let max_residual = fold(|p| p.residual);
    let pass = max_residual <= tol.tol_residual
        && (!compare_sups || sup_transported <= input_sup + tol.tol_residual)
        && sup_n.map_or(true, f64::is_finite);
    TransportCertificate {
        points,
        sup_transported,
        input_sup,
        max_residual,
        domain_norms,
        sup_n,
        max_inverse_norm,
        pass,
    }
}

/// `‖(r1 - r2) - D_{left*} w D_{right}‖`.
fn sandwich_residual(
    r1: &ComplexMatrix,
    r2: &ComplexMatrix,
    left: &ComplexMatrix,
    right: &ComplexMatrix,
    w: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<f64, RedhefferError> {
    let (dl, dr) = (defect_pair(left, tol)?, defect_pair(right, tol)?);
    Ok((r1 - r2 - &dl.d_star * w * &dr.d).norm2())
}

/// Carries a two-sided witness `F₁ - F₂ = D_{F₁*} Q̃ D_{F₂}` through `R_Φ`: with `L` built
/// from `K = F₂` and `L_*` from `K = F₁`, `R[F₁] - R[F₂] = D_{R[F₁]*} (L_* Q̃ L) D_{R[F₂]}`.
pub fn transport_equiv(
    phi: &RedhefferCoefficients,
    f1: &SchurFunction,
    f2: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<TransportCertificate, RedhefferError> {
    let verdict = classify_equiv_infty(f1, f2, grid, tol)?.verdict;
    if verdict.is_refuted() {
        return Err(RedhefferError::Refused(format!("F₁ ∼∞ F₂ refuted ({verdict:?})")));
    }
    let (n1, n2) = (phi.domain_norm(f1)?, phi.domain_norm(f2)?);
    if in_domain(n1) != in_domain(n2) {
        return Err(RedhefferError::DomainAsymmetry { first: n1, second: n2 });
    }
    if !in_domain(n1) {
        return Err(RedhefferError::OutsideDomain { norm: n1.max(n2), margin: TOL_DOMAIN });
    }
    let with_boundary = phi.extends_to_boundary() && f1.extends_to_boundary() && f2.extends_to_boundary();
    let mut points = Vec::new();
    for p in sample_points(grid, with_boundary) {
        let z = p.lambda;
        let b = phi.eval_blocks(z)?;
        let (k1, k2) = (f1.eval(z)?, f2.eval(z)?);
        let (dk1, dk2) = (defect_pair(&k1, tol)?, defect_pair(&k2, tol)?);
        let q_tilde = match sandwich_solve(&(&k1 - &k2), &dk1.d_star, &dk2.d, tol) {
            Ok(q) => q,
            Err(NumericError::NoSandwichWitness { residual }) => {
                return Err(refuse_at(z, "no two-sided witness for F₁ - F₂", residual))
            }
            Err(e) => return Err(e.into()),
        };
        let at2 = factors_at(&b, &k2, z, tol)?;
        let at1 = factors_at(&b, &k1, z, tol)?;
        let w = &at1.l_star * &q_tilde * &at2.l;
        points.push(TransportPoint {
            radius: p.radius,
            angle: p.angle,
            lambda: z,
            norm_l: at2.l.norm2(),
            norm_l_star: at1.l_star.norm2(),
            norm_witness: w.norm2(),
            norm_input: q_tilde.norm2(),
            residual: sandwich_residual(&at1.r, &at2.r, &at1.r, &at2.r, &w, tol)?,
        });
    }
    Ok(summarize(points, (n1, n2), None, None, tol, true))
}

/// Carries a one-sided witness `F - G = D_{G*} Q D_G` through `R_Φ`:
/// `R[F] - R[G] = D_{R[G]*} (N Q L) D_{R[G]}` with `N = L_*(I + Q D_G Φ₁₁ (I - FΦ₁₁)^{-1} D_{G*})`
/// and `L`, `L_*` built from `K = G`.
pub fn transport_preorder(
    phi: &RedhefferCoefficients,
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<TransportCertificate, RedhefferError> {
    match classify_preceq_infty(f, g, grid, tol)?.verdict {
        Verdict::Supported => {}
        Verdict::Inconclusive => {
            return Err(RedhefferError::HypothesisUnmet("F ≺∞ G is inconclusive on this grid".into()))
        }
        v => return Err(RedhefferError::Refused(format!("F ≺∞ G refuted ({v:?})"))),
    }
    let (nf, ng) = (phi.require_domain(f)?, phi.require_domain(g)?);
    let with_boundary = phi.extends_to_boundary() && f.extends_to_boundary() && g.extends_to_boundary();
    let mut points = Vec::new();
    let mut sup_n = 0.0f64;
    let mut max_inverse_norm = 0.0f64;
    for p in sample_points(grid, with_boundary) {
        let z = p.lambda;
        let b = phi.eval_blocks(z)?;
        let (kf, kg) = (f.eval(z)?, g.eval(z)?);
        let cf = Contraction::new(kf.clone(), tol).map_err(RedhefferError::from)?;
        let cg = Contraction::new(kg.clone(), tol).map_err(RedhefferError::from)?;
        let q = match check_preceq(&cf, &cg, tol) {
            Ok(w) => w.x,
            Err(PreorderError::Refused(r)) => return Err(refuse_at(z, "F(λ) ⊀ G(λ)", r.residual)),
            Err(PreorderError::Numeric(e)) => return Err(e.into()),
            Err(e) => return Err(RedhefferError::Refused(format!("{e} at λ = {z}"))),
        };
        let inv = b.inv_right(&kf, z).map_err(|e| match e {
            SchurError::Singular { cond, .. } => RedhefferError::HypothesisUnmet(format!(
                "I - F(λ)Φ₁₁(λ) is singular at λ = {z} (condition {cond:.3e})"
            )),
            other => other.into(),
        })?;
        let inv_norm = inv.norm2();
        if !(inv_norm <= INVERSE_NORM_CAP) {
            return Err(RedhefferError::HypothesisUnmet(format!(
                "‖(I - F(λ)Φ₁₁(λ))^{{-1}}‖ = {inv_norm:.3e} exceeds {INVERSE_NORM_CAP:e} at λ = {z}"
            )));
        }
        max_inverse_norm = max_inverse_norm.max(inv_norm);
        let at = factors_at(&b, &kg, z, tol)?;
        let id = ComplexMatrix::identity(kf.rows());
        let n = &at.l_star * (id + &q * cg.d() * &b.p11 * &inv * cg.d_star());
        sup_n = sup_n.max(n.norm2());
        let w = &n * &q * &at.l;
        let rf = b.map(&kf, z)?;
        points.push(TransportPoint {
            radius: p.radius,
            angle: p.angle,
            lambda: z,
            norm_l: at.l.norm2(),
            norm_l_star: at.l_star.norm2(),
            norm_witness: w.norm2(),
            norm_input: q.norm2(),
            residual: sandwich_residual(&rf, &at.r, &at.r, &at.r, &w, tol)?,
        });
    }
    Ok(summarize(points, (nf, ng), Some(sup_n), Some(max_inverse_norm), tol, false))
}

/// `Q̃_R(λ)` with `R[F] - R[G] = D_{R[F]*} Q̃_R D_{R[G]}` at a boundary sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TildeSample {
    pub lambda: Complex64,
    pub q_tilde: ComplexMatrix,
}

/// Direct two-sided witnesses for `R_Φ[F] ∼ R_Φ[G]` at the boundary samples of `grid`.
pub fn boundary_tilde_witnesses(
    phi: &RedhefferCoefficients,
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<Vec<TildeSample>, RedhefferError> {
    if !(phi.extends_to_boundary() && f.extends_to_boundary() && g.extends_to_boundary()) {
        return Err(RedhefferError::BadInput("boundary witnesses need functions that extend to the circle".into()));
    }
    let (rf, rg) = (super::apply(phi, f)?, super::apply(phi, g)?);
    grid.boundary_points()
        .into_iter()
        .map(|p| {
            let (a, b) = (rf.eval(p.lambda)?, rg.eval(p.lambda)?);
            let (da, db) = (defect_pair(&a, tol)?, defect_pair(&b, tol)?);
            match sandwich_solve(&(&a - &b), &da.d_star, &db.d, tol) {
                Ok(q_tilde) => Ok(TildeSample { lambda: p.lambda, q_tilde }),
                Err(NumericError::NoSandwichWitness { residual }) => {
                    Err(refuse_at(p.lambda, "no two-sided witness for R[F] - R[G]", residual))
                }
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackPoint {
    pub angle: f64,
    pub lambda: Complex64,
    /// `‖D_{F*} Q D_G - (F - G)‖` for the recovered `Q`.
    pub residual: f64,
    /// `‖Q_recovered - Q_direct‖`.
    pub discrepancy: f64,
    pub norm_recovered: f64,
    pub norm_direct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PullbackReport {
    pub points: Vec<PullbackPoint>,
    pub max_residual: f64,
    pub max_discrepancy: f64,
    pub pass: bool,
}

fn check_pullback_hypotheses(
    phi: &RedhefferCoefficients,
    grid: &SamplingGrid,
) -> Result<(), RedhefferError> {
    if !phi.extends_to_boundary() {
        return Err(RedhefferError::HypothesisUnmet("Φ does not extend to the circle".into()));
    }
    let pts: Vec<GridPoint> = sample_points(grid, true);
    invertible_branch(phi, &pts)?;
    let inner = inner_check(phi.assembled(), grid.boundary_angles)?;
    if !inner.two_sided() {
        return Err(RedhefferError::HypothesisUnmet(format!(
            "Φ is not two-sided inner (defects {:.3e}, {:.3e})",
            inner.inner_defect, inner.co_inner_defect
        )));
    }
    Ok(())
}

/// Recovers a witness for `F ∼ G` on the circle from witnesses `Q̃_R` for
/// `R_Φ[F] ∼ R_Φ[G]` as `Q = L_*^* Q̃_R L^*` (with `L` from `K = G`, `L_*` from `K = F`),
/// valid for two-sided inner `Φ`, and compares it against the direct pointwise witness.
pub fn pullback_equiv(
    phi: &RedhefferCoefficients,
    f: &SchurFunction,
    g: &SchurFunction,
    q_tilde: &[TildeSample],
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<PullbackReport, RedhefferError> {
    phi.require_domain(f)?;
    phi.require_domain(g)?;
    if grid.boundary_angles == 0 {
        return Err(RedhefferError::BadInput("pull-back needs boundary samples".into()));
    }
    check_pullback_hypotheses(phi, grid)?;
    if !(f.extends_to_boundary() && g.extends_to_boundary()) {
        return Err(RedhefferError::BadInput("F and G must extend to the circle".into()));
    }
    let mut points = Vec::new();
    for p in grid.boundary_points() {
        let z = p.lambda;
        let qt = q_tilde
            .iter()
            .find(|s| (s.lambda - z).norm() <= 1e-12)
            .ok_or_else(|| RedhefferError::BadInput(format!("no Q̃ sample at λ = {z}")))?;
        let b = phi.eval_blocks(z)?;
        let (kf, kg) = (f.eval(z)?, g.eval(z)?);
        let at_g = factors_at(&b, &kg, z, tol)?;
        let at_f = factors_at(&b, &kf, z, tol)?;
        let recovered = at_f.l_star.adjoint() * &qt.q_tilde * at_g.l.adjoint();
        let (df, dg) = (defect_pair(&kf, tol)?, defect_pair(&kg, tol)?);
        let diff = &kf - &kg;
        let direct = match sandwich_solve(&diff, &df.d_star, &dg.d, tol) {
            Ok(q) => q,
            Err(NumericError::NoSandwichWitness { residual }) => {
                return Err(refuse_at(z, "no two-sided witness for F - G", residual))
            }
            Err(e) => return Err(e.into()),
        };
        points.push(PullbackPoint {
            angle: p.angle,
            lambda: z,
            residual: (&df.d_star * &recovered * &dg.d - &diff).norm2(),
            discrepancy: (&recovered - &direct).norm2(),
            norm_recovered: recovered.norm2(),
            norm_direct: direct.norm2(),
        });
    }
    let max_residual = points.iter().map(|p| p.residual).fold(0.0, f64::max);
    let max_discrepancy = points.iter().map(|p| p.discrepancy).fold(0.0, f64::max);
    Ok(PullbackReport {
        pass: max_residual <= PULLBACK_TOL && max_discrepancy <= PULLBACK_TOL,
        points,
        max_residual,
        max_discrepancy,
    })
}
