use serde::Serialize;

use super::{CurveSpec, SchurError, SchurFunction};
use crate::numeric::{Complex64, ComplexMatrix, Tolerances};

/// Smallest `‖u‖ - ‖G(λ_t)u‖` above which the radial premise counts as never triggered.
pub const VACUOUS_GAP: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryBoundReport {
    pub lambda: Complex64,
    /// `‖G(λ)u - F(λ)u‖`.
    pub lhs: f64,
    /// `q_inf √(2‖u‖(‖u‖ - ‖G(λ)u‖))`.
    pub rhs: f64,
    pub pass: bool,
}

fn vec_norm(v: &ComplexMatrix) -> f64 {
    v.frobenius_norm()
}

/// Checks `‖G(λ)u - F(λ)u‖ <= q_inf √(2‖u‖(‖u‖ - ‖G(λ)u‖))`, which holds whenever `q_inf`
/// bounds a witness `Q` for `F ≺∞ G`.
pub fn boundary_bound_check(
    f: &SchurFunction,
    g: &SchurFunction,
    q_inf: f64,
    u: &ComplexMatrix,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<BoundaryBoundReport, SchurError> {
    if u.cols() != 1 || u.rows() != g.in_dim() {
        return Err(SchurError::Invalid(format!("u must be a {}-vector", g.in_dim())));
    }
    let gu = g.eval(lambda)? * u;
    let fu = f.eval(lambda)? * u;
    let nu = vec_norm(u);
    let lhs = vec_norm(&(&gu - &fu));
    let gap = (nu - vec_norm(&gu)).max(0.0);
    let rhs = q_inf * (2.0 * nu * gap).sqrt();
    Ok(BoundaryBoundReport { lambda, lhs, rhs, pass: lhs <= rhs + tol.tol_residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Premise {
    /// `‖G(λ_t)u‖` gets within `VACUOUS_GAP` of `‖u‖` somewhere on the curve.
    Active,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialRow {
    pub t: f64,
    pub lambda: Complex64,
    pub norm_gu: f64,
    pub norm_fu: f64,
    pub norm_diff: f64,
    pub norm_g: f64,
    pub norm_f: f64,
    /// `‖u‖ - ‖G(λ_t)u‖`.
    pub gap_g: f64,
    /// `‖u‖ - ‖F(λ_t)u‖`.
    pub gap_f: f64,
    /// `gap_g + q_inf √(2‖u‖ gap_g)`.
    pub allowed_gap_f: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProbeReport {
    pub rows: Vec<RadialRow>,
    pub premise: Premise,
    pub min_gap_g: f64,
    pub pass: bool,
    /// True when the endpoint lies on the circle and was skipped for a non-extendable tree.
    pub endpoint_skipped: bool,
}

/// Tabulates `‖G(λ_t)u‖` and `‖F(λ_t)u‖` along a curve and checks that `F` follows `G`
/// to the boundary: `gap_F <= gap_G + q_inf √(2‖u‖ gap_G)` at every sample.
pub fn radial_probe(
    f: &SchurFunction,
    g: &SchurFunction,
    curve: &CurveSpec,
    u: &ComplexMatrix,
    q_inf: f64,
    tol: &Tolerances,
) -> Result<RadialProbeReport, SchurError> {
    if u.cols() != 1 || u.rows() != g.in_dim() {
        return Err(SchurError::Invalid(format!("u must be a {}-vector", g.in_dim())));
    }
    let extends = f.extends_to_boundary() && g.extends_to_boundary();
    let nu = vec_norm(u);
    let mut rows = Vec::new();
    let mut endpoint_skipped = false;
    for p in curve.samples()? {
        if p.lambda.norm() >= 1.0 && !extends {
            endpoint_skipped = true;
            continue;
        }
        let (gv, fv) = (g.eval(p.lambda)?, f.eval(p.lambda)?);
        let (gu, fu) = (&gv * u, &fv * u);
        let norm_gu = vec_norm(&gu);
        let norm_fu = vec_norm(&fu);
        let gap_g = (nu - norm_gu).max(0.0);
        let gap_f = nu - norm_fu;
        let allowed_gap_f = gap_g + q_inf * (2.0 * nu * gap_g).sqrt();
        rows.push(RadialRow {
            t: p.t,
            lambda: p.lambda,
            norm_gu,
            norm_fu,
            norm_diff: vec_norm(&(&gu - &fu)),
            norm_g: gv.norm2(),
            norm_f: fv.norm2(),
            gap_g,
            gap_f,
            allowed_gap_f,
            pass: gap_f <= allowed_gap_f + tol.tol_residual,
        });
    }
    let min_gap_g = rows.iter().map(|r| r.gap_g).fold(f64::INFINITY, f64::min);
    let premise = if min_gap_g > VACUOUS_GAP { Premise::Vacuous } else { Premise::Active };
    let pass = rows.iter().all(|r| r.pass);
    Ok(RadialProbeReport { rows, premise, min_gap_g, pass, endpoint_skipped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn t() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn scalar_bound() {
        let zero = SchurFunction::scalar(c(0.0)).unwrap();
        let half = SchurFunction::scalar(c(0.5)).unwrap();
        let u = ComplexMatrix::real_scalar(1.0);
        // lhs 0.5, rhs q·√(2·1·0.5) = q
        let tight = boundary_bound_check(&zero, &half, 2.0 / 3.0, &u, c(0.3), &t()).unwrap();
        assert!((tight.lhs - 0.5).abs() < 1e-15 && (tight.rhs - 2.0 / 3.0).abs() < 1e-15);
        assert!(tight.pass);
        assert!(!boundary_bound_check(&zero, &half, 0.4, &u, c(0.3), &t()).unwrap().pass);
        let same = boundary_bound_check(&half, &half, 0.0, &u, c(0.3), &t()).unwrap();
        assert_eq!(same.lhs, 0.0);
        assert!(same.pass);
    }

    #[test]
    fn radial_follow() {
        let b = SchurFunction::blaschke(c(0.5), 0.0).unwrap();
        let u = ComplexMatrix::real_scalar(1.0);
        let rep = radial_probe(&b, &b, &CurveSpec::radial(c(1.0), 20), &u, 0.0, &t()).unwrap();
        assert_eq!(rep.premise, Premise::Active);
        assert!(rep.pass);
        let last = rep.rows.last().unwrap();
        assert!((last.norm_gu - 1.0).abs() < 1e-12 && (last.norm_fu - 1.0).abs() < 1e-12);

        let half = SchurFunction::scalar(c(0.5)).unwrap();
        let rep = radial_probe(&half, &half, &CurveSpec::radial(c(1.0), 10), &u, 0.0, &t()).unwrap();
        assert_eq!(rep.premise, Premise::Vacuous);
    }
}
