use std::f64::consts::TAU;

use serde::Serialize;

use super::grid::sup_norm_of;
use super::profile::{contraction_at, ring_maxima_of};
use super::{
    pointwise_witness_profile, DivergencePolicy, ProfileClass, RadiusTrace, SamplingGrid, SchurError,
    SchurFunction, WitnessProfile,
};
use crate::numeric::{sandwich_solve, Complex64, NumericError, Tolerances};

/// Number of `ε` samples on the circle `|ε| = r` in the corroboration stage.
pub const CORROBORATION_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Supported,
    RefutedDiverging,
    RefutedPointwise,
    Inconclusive,
}

impl Verdict {
    pub fn is_refuted(self) -> bool {
        matches!(self, Verdict::RefutedDiverging | Verdict::RefutedPointwise)
    }
}

/// Sup-norm test of the perturbations `(1 - ε)G + εF`, `|ε| = r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corroboration {
    pub r: f64,
    pub samples: usize,
    pub max_norm: f64,
    pub argmax_eps: Complex64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreceqInftyReport {
    pub verdict: Verdict,
    pub profile: WitnessProfile,
    pub corroboration: Option<Corroboration>,
}

/// Evidence for or against `F ≺∞ G`: the pointwise profile decides divergence; a bounded
/// profile is then corroborated by checking that the segment `(1 - ε)G + εF`, `|ε| ≤ r`,
/// stays contractive for `r` the smallest pointwise radius.
pub fn classify_preceq_infty(
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<PreceqInftyReport, SchurError> {
    let profile = pointwise_witness_profile(f, g, grid, tol)?;
    let (verdict, corroboration) = match profile.classification {
        ProfileClass::RefusedPointwise => (Verdict::RefutedPointwise, None),
        ProfileClass::EvidenceDiverging => (Verdict::RefutedDiverging, None),
        ProfileClass::Inconclusive => (Verdict::Inconclusive, None),
        ProfileClass::EvidenceBounded if profile.inf_r_lambda > 0.0 => {
            let c = corroborate(f, g, profile.inf_r_lambda, grid, tol)?;
            (if c.pass { Verdict::Supported } else { Verdict::Inconclusive }, Some(c))
        }
        ProfileClass::EvidenceBounded => (Verdict::Inconclusive, None),
    };
    Ok(PreceqInftyReport { verdict, profile, corroboration })
}

fn corroborate(
    f: &SchurFunction,
    g: &SchurFunction,
    r: f64,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<Corroboration, SchurError> {
    let with_boundary = f.extends_to_boundary() && g.extends_to_boundary();
    let one = Complex64::new(1.0, 0.0);
    let mut max_norm = 0.0f64;
    let mut argmax_eps = Complex64::new(r, 0.0);
    for k in 0..CORROBORATION_SAMPLES {
        let eps = Complex64::from_polar(r, TAU * k as f64 / CORROBORATION_SAMPLES as f64);
        let n = sup_norm_of(
            |z| Ok(g.eval(z)?.scale(one - eps) + f.eval(z)?.scale(eps)),
            grid,
            with_boundary,
        )?;
        if n > max_norm {
            max_norm = n;
            argmax_eps = eps;
        }
    }
    Ok(Corroboration {
        r,
        samples: CORROBORATION_SAMPLES,
        max_norm,
        argmax_eps,
        pass: max_norm <= 1.0 + tol.tol_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TildePoint {
    pub radius: f64,
    pub angle: f64,
    pub lambda: Complex64,
    pub norm_q_tilde: f64,
    /// `‖Q(λ)‖ √(2‖Q'(λ)‖ + 1)` from the two one-sided profiles.
    pub bound: f64,
    pub bound_pass: bool,
}

/// Pointwise `Q̃(λ)` with `F - G = D_{F*} Q̃ D_G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TildeProfile {
    pub points: Vec<TildePoint>,
    pub sup_q_tilde: f64,
    pub classification: ProfileClass,
    pub growth_ratios: Vec<RadiusTrace>,
    pub refusal_lambda: Option<Complex64>,
    pub bound_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivInftyReport {
    pub verdict: Verdict,
    pub forward: PreceqInftyReport,
    pub backward: PreceqInftyReport,
    pub tilde: TildeProfile,
}

/// Evidence for or against `F ∼∞ G`: both one-sided verdicts plus the two-sided witness
/// `Q̃` profiled on the same grid, with its norm bound checked pointwise.
pub fn classify_equiv_infty(
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<EquivInftyReport, SchurError> {
    let forward = classify_preceq_infty(f, g, grid, tol)?;
    let backward = classify_preceq_infty(g, f, grid, tol)?;
    let tilde = tilde_profile(f, g, grid, tol, &forward.profile, &backward.profile)?;

    let verdicts = [forward.verdict, backward.verdict];
    let verdict = if verdicts.contains(&Verdict::RefutedPointwise) || tilde.refusal_lambda.is_some() {
        Verdict::RefutedPointwise
    } else if verdicts.contains(&Verdict::RefutedDiverging)
        || tilde.classification == ProfileClass::EvidenceDiverging
    {
        Verdict::RefutedDiverging
    } else if verdicts == [Verdict::Supported; 2] {
        Verdict::Supported
    } else {
        Verdict::Inconclusive
    };
    Ok(EquivInftyReport { verdict, forward, backward, tilde })
}

fn tilde_profile(
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
    forward: &WitnessProfile,
    backward: &WitnessProfile,
) -> Result<TildeProfile, SchurError> {
    let mut points = Vec::new();
    let mut refusal_lambda = None;
    for p in grid.interior_points() {
        let a = contraction_at(f, p.lambda, tol)?;
        let b = contraction_at(g, p.lambda, tol)?;
        let diff = &a.matrix - &b.matrix;
        match sandwich_solve(&diff, a.d_star(), b.d(), tol) {
            Ok(qt) => {
                let norm_q_tilde = qt.norm2();
                let bound = match (forward.point_at(p.lambda), backward.point_at(p.lambda)) {
                    (Some(q), Some(qp)) => q.norm_q * (2.0 * qp.norm_q + 1.0).sqrt(),
                    _ => f64::INFINITY,
                };
                let slack = tol.tol_residual * bound.max(1.0);
                points.push(TildePoint {
                    radius: p.radius,
                    angle: p.angle,
                    lambda: p.lambda,
                    norm_q_tilde,
                    bound,
                    bound_pass: norm_q_tilde <= bound + slack,
                });
            }
            Err(NumericError::NoSandwichWitness { .. }) => {
                refusal_lambda.get_or_insert(p.lambda);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let policy = DivergencePolicy::default();
    let growth = ring_maxima_of(points.iter().map(|p| (p.radius, p.norm_q_tilde)), grid, policy.floor);
    let maxima: Vec<f64> = growth.iter().map(|t| t.max_q).collect();
    let classification =
        if refusal_lambda.is_some() { ProfileClass::RefusedPointwise } else { policy.classify(&maxima) };
    Ok(TildeProfile {
        sup_q_tilde: points.iter().map(|p| p.norm_q_tilde).fold(0.0, f64::max),
        bound_violations: points.iter().filter(|p| !p.bound_pass).count(),
        points,
        classification,
        growth_ratios: growth,
        refusal_lambda,
    })
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
    fn preceq_verdicts() {
        let grid = SamplingGrid::default();
        let zero = SchurFunction::scalar(c(0.0)).unwrap();
        let half = SchurFunction::scalar(c(0.5)).unwrap();
        let lin = SchurFunction::scaled_variable(c(1.0)).unwrap();
        let b = SchurFunction::blaschke(c(0.5), 0.0).unwrap();
        let rep = classify_preceq_infty(&zero, &half, &grid, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::Supported);
        assert!(rep.corroboration.unwrap().max_norm <= 1.0);
        assert_eq!(classify_preceq_infty(&zero, &lin, &grid, &t()).unwrap().verdict, Verdict::RefutedDiverging);
        assert_eq!(classify_preceq_infty(&b, &b, &grid, &t()).unwrap().verdict, Verdict::Supported);
    }

    #[test]
    fn isometric_target_refuses_pointwise() {
        let grid = SamplingGrid::geometric(3, 8, 8).unwrap();
        let one = SchurFunction::scalar(c(1.0)).unwrap();
        let half = SchurFunction::scalar(c(0.5)).unwrap();
        let rep = classify_preceq_infty(&half, &one, &grid, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::RefutedPointwise);
        assert!(rep.profile.refusal_lambda.is_some());
    }

    #[test]
    fn equiv_verdicts() {
        let grid = SamplingGrid::default();
        let a = SchurFunction::scalar(c(0.2)).unwrap();
        let b = SchurFunction::scalar(Complex64::new(-0.3, 0.4)).unwrap();
        let rep = classify_equiv_infty(&a, &b, &grid, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::Supported);
        assert_eq!(rep.tilde.bound_violations, 0);

        let b3 = SchurFunction::blaschke(c(0.3), 0.0).unwrap();
        let b5 = SchurFunction::blaschke(c(0.5), 0.0).unwrap();
        let rep = classify_equiv_infty(&b3, &b5, &grid, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::RefutedDiverging);
        assert_eq!(rep.forward.profile.refusals, 0);

        let rep = classify_equiv_infty(&b5, &b5, &grid, &t()).unwrap();
        assert_eq!(rep.verdict, Verdict::Supported);
        assert_eq!(rep.tilde.sup_q_tilde, 0.0);
    }
}
