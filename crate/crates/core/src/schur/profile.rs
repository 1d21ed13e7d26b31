use serde::{Deserialize, Serialize};

use super::{GridPoint, SamplingGrid, SchurError, SchurFunction};
use crate::numeric::{Complex64, ComplexMatrix, Tolerances};
use crate::preorder::{check_preceq, Contraction, PreorderError};

/// Thresholds that turn per-radius maxima `m_j = max_θ ‖Q(r_j e^{iθ})‖` into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergencePolicy {
    /// Diverging needs `m_J >= diverge_factor * max(m_1, floor)`.
    pub diverge_factor: f64,
    /// ... and the last `tail` ratios `m_{j+1}/m_j` at least this.
    pub diverge_ratio: f64,
    /// Bounded needs `m_J <= bounded_factor * max(m_1, floor)`.
    pub bounded_factor: f64,
    /// ... and the last `tail` ratios at most this.
    pub bounded_ratio: f64,
    pub tail: usize,
    pub floor: f64,
}

impl Default for DivergencePolicy {
    fn default() -> Self {
        Self {
            diverge_factor: 100.0,
            diverge_ratio: 1.05,
            bounded_factor: 10.0,
            bounded_ratio: 1.005,
            tail: 3,
            floor: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileClass {
    EvidenceBounded,
    EvidenceDiverging,
    Inconclusive,
    RefusedPointwise,
}

impl DivergencePolicy {
    pub fn classify(&self, maxima: &[f64]) -> ProfileClass {
        let (Some(&first), Some(&last)) = (maxima.first(), maxima.last()) else {
            return ProfileClass::Inconclusive;
        };
        let base = first.max(self.floor);
        let ratios = growth_ratios(maxima, self.floor);
        let tail = &ratios[ratios.len().saturating_sub(self.tail)..];
        if last >= self.diverge_factor * base && !tail.is_empty() && tail.iter().all(|&q| q >= self.diverge_ratio)
        {
            ProfileClass::EvidenceDiverging
        } else if last <= self.bounded_factor * base && tail.iter().all(|&q| q <= self.bounded_ratio) {
            ProfileClass::EvidenceBounded
        } else {
            ProfileClass::Inconclusive
        }
    }
}

fn growth_ratios(maxima: &[f64], floor: f64) -> Vec<f64> {
    maxima.windows(2).map(|w| w[1] / w[0].max(floor)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub radius: f64,
    pub angle: f64,
    pub lambda: Complex64,
    pub norm_q: f64,
    pub norm_r: f64,
    pub r_lambda: f64,
    pub residual: f64,
    /// Ambient minimal-norm witness `Q(λ)` with `F - G = D_{G*} Q D_G`.
    #[serde(skip)]
    pub q: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusTrace {
    pub radius: f64,
    pub max_q: f64,
    /// `max_q` over the previous ring's `max_q`; absent on the first ring.
    pub ratio: Option<f64>,
}

/// Grid-sampled pointwise witnesses for `F ≺ G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessProfile {
    pub points: Vec<ProfilePoint>,
    pub sup_q: f64,
    pub sup_r: f64,
    pub inf_r_lambda: f64,
    pub classification: ProfileClass,
    pub growth_ratios: Vec<RadiusTrace>,
    /// First grid point where the pointwise check refused.
    pub refusal_lambda: Option<Complex64>,
    pub refusals: usize,
    pub policy: DivergencePolicy,
}

impl WitnessProfile {
    pub fn point_at(&self, lambda: Complex64) -> Option<&ProfilePoint> {
        self.points.iter().find(|p| p.lambda == lambda)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("radius,angle,norm_q,norm_r,r_lambda,residual\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:?},{:?},{:?},{:?},{:?},{:?}\n",
                p.radius, p.angle, p.norm_q, p.norm_r, p.r_lambda, p.residual
            ));
        }
        out
    }
}

pub(crate) fn contraction_at(
    f: &SchurFunction,
    lambda: Complex64,
    tol: &Tolerances,
) -> Result<Contraction, SchurError> {
    Ok(Contraction::new(f.eval(lambda)?, tol)?)
}

/// Runs the pointwise check `F(λ) ≺ G(λ)` over the interior grid with the default policy.
pub fn pointwise_witness_profile(
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
) -> Result<WitnessProfile, SchurError> {
    pointwise_witness_profile_with(f, g, grid, tol, &DivergencePolicy::default())
}

pub fn pointwise_witness_profile_with(
    f: &SchurFunction,
    g: &SchurFunction,
    grid: &SamplingGrid,
    tol: &Tolerances,
    policy: &DivergencePolicy,
) -> Result<WitnessProfile, SchurError> {
    if f.shape() != g.shape() {
        return Err(SchurError::Invalid(format!("shape mismatch {:?} vs {:?}", f.shape(), g.shape())));
    }
    let mut points = Vec::with_capacity(grid.radii.len() * grid.angles);
    let mut refusal_lambda = None;
    let mut refusals = 0;
    for GridPoint { radius, angle, lambda } in grid.interior_points() {
        let a = contraction_at(f, lambda, tol)?;
        let b = contraction_at(g, lambda, tol)?;
        match check_preceq(&a, &b, tol) {
            Ok(w) => points.push(ProfilePoint {
                radius,
                angle,
                lambda,
                norm_q: w.x.norm2(),
                norm_r: w.y.norm2(),
                r_lambda: w.r,
                residual: w.residuals.x.max(w.residuals.y),
                q: w.x,
            }),
            Err(PreorderError::Refused(_)) => {
                refusals += 1;
                refusal_lambda.get_or_insert(lambda);
            }
            Err(PreorderError::Numeric(e)) => return Err(e.into()),
            Err(e) => return Err(SchurError::Invalid(e.to_string())),
        }
    }
    let growth = ring_maxima_of(points.iter().map(|p| (p.radius, p.norm_q)), grid, policy.floor);
    let maxima: Vec<f64> = growth.iter().map(|t| t.max_q).collect();
    let classification =
        if refusals > 0 { ProfileClass::RefusedPointwise } else { policy.classify(&maxima) };
    let fold = |init: f64, pick: fn(&ProfilePoint) -> f64, op: fn(f64, f64) -> f64| {
        points.iter().map(pick).fold(init, op)
    };
    let sup_q = fold(0.0, |p| p.norm_q, f64::max);
    let sup_r = fold(0.0, |p| p.norm_r, f64::max);
    let inf_r = if points.is_empty() { 0.0 } else { fold(f64::INFINITY, |p| p.r_lambda, f64::min) };
    Ok(WitnessProfile {
        points,
        sup_q,
        sup_r,
        inf_r_lambda: inf_r,
        classification,
        growth_ratios: growth,
        refusal_lambda,
        refusals,
        policy: *policy,
    })
}

pub(crate) fn ring_maxima_of(
    values: impl Iterator<Item = (f64, f64)> + Clone,
    grid: &SamplingGrid,
    floor: f64,
) -> Vec<RadiusTrace> {
    let mut out: Vec<RadiusTrace> = Vec::with_capacity(grid.radii.len());
    for &r in &grid.radii {
        let max_q = values.clone().filter(|&(rr, _)| rr == r).map(|(_, v)| v).fold(0.0, f64::max);
        let ratio = out.last().map(|prev| max_q / prev.max_q.max(floor));
        out.push(RadiusTrace { radius: r, max_q, ratio });
    }
    out
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
    fn linear_counterexample_diverges() {
        let zero = SchurFunction::scalar(c(0.0)).unwrap();
        let lin = SchurFunction::scaled_variable(c(1.0)).unwrap();
        let grid = SamplingGrid::default();
        let p = pointwise_witness_profile(&zero, &lin, &grid, &t()).unwrap();
        assert_eq!(p.classification, ProfileClass::EvidenceDiverging);
        for w in p.growth_ratios.iter().skip(1) {
            assert!(w.ratio.unwrap() >= 1.5, "{w:?}");
        }
        // closed form -λ/(1-|λ|²) on the real axis
        let pt = p.point_at(c(0.5)).unwrap();
        assert!((pt.q.get(0, 0).re + 0.5 / 0.75).abs() < 1e-12);
    }

    #[test]
    fn reflexive_is_bounded() {
        let b = SchurFunction::blaschke(c(0.5), 0.0).unwrap();
        let p = pointwise_witness_profile(&b, &b, &SamplingGrid::default(), &t()).unwrap();
        assert_eq!(p.sup_q, 0.0);
        assert_eq!(p.classification, ProfileClass::EvidenceBounded);
    }

    #[test]
    fn strict_constant_target() {
        let zero = SchurFunction::scalar(c(0.0)).unwrap();
        let half = SchurFunction::scalar(c(0.5)).unwrap();
        let p = pointwise_witness_profile(&zero, &half, &SamplingGrid::default(), &t()).unwrap();
        assert_eq!(p.classification, ProfileClass::EvidenceBounded);
        assert!((p.sup_q - 0.5 / 0.75).abs() < 1e-12);
        assert!(p.points.iter().all(|q| (q.q.get(0, 0).re + 0.5 / 0.75).abs() < 1e-12));
    }

    #[test]
    fn csv_header() {
        let zero = SchurFunction::scalar(c(0.0)).unwrap();
        let grid = SamplingGrid::new(vec![0.5], 2, 0).unwrap();
        let p = pointwise_witness_profile(&zero, &zero, &grid, &t()).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("radius,angle,norm_q,norm_r,r_lambda,residual\n"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn policy_edges() {
        let pol = DivergencePolicy::default();
        assert_eq!(pol.classify(&[0.0; 10]), ProfileClass::EvidenceBounded);
        assert_eq!(pol.classify(&[1.0, 2.0, 4.0]), ProfileClass::Inconclusive);
        let grow: Vec<f64> = (0..10).map(|j| 2f64.powi(j)).collect();
        assert_eq!(pol.classify(&grow), ProfileClass::EvidenceDiverging);
    }
}
