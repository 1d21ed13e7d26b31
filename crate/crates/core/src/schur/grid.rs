use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{SchurError, SchurFunction};
use crate::numeric::{Complex64, ComplexMatrix};

/// Polar sampling of the disc: rings at `radii` with `angles` points each, plus
/// `boundary_angles` points on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub boundary_angles: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub radius: f64,
    pub angle: f64,
    pub lambda: Complex64,
}

impl GridPoint {
    fn polar(radius: f64, angle: f64) -> Self {
        Self { radius, angle, lambda: Complex64::from_polar(radius, angle) }
    }
}

impl Default for SamplingGrid {
    fn default() -> Self {
        Self::geometric(10, 64, 256).expect("default grid is valid")
    }
}

impl SamplingGrid {
    pub fn new(radii: Vec<f64>, angles: usize, boundary_angles: usize) -> Result<Self, SchurError> {
        if radii.is_empty() || angles == 0 {
            return Err(SchurError::BadGrid("need at least one radius and one angle".into()));
        }
        if radii.iter().any(|r| !(0.0..1.0).contains(r)) {
            return Err(SchurError::BadGrid("radii must lie in [0, 1)".into()));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SchurError::BadGrid("radii must be strictly increasing".into()));
        }
        Ok(Self { radii, angles, boundary_angles })
    }

    /// Radii `1 - 2^{-j}` for `j = 1..=depth`.
    pub fn geometric(depth: usize, angles: usize, boundary_angles: usize) -> Result<Self, SchurError> {
        let radii = (1..=depth as i32).map(|j| 1.0 - 2f64.powi(-j)).collect();
        Self::new(radii, angles, boundary_angles)
    }

    pub fn outer_radius(&self) -> f64 {
        *self.radii.last().expect("validated non-empty")
    }

    pub fn ring(&self, radius: f64) -> Vec<GridPoint> {
        (0..self.angles).map(|k| GridPoint::polar(radius, TAU * k as f64 / self.angles as f64)).collect()
    }

    /// Ring by ring, angle by angle.
    pub fn interior_points(&self) -> Vec<GridPoint> {
        self.radii.iter().flat_map(|&r| self.ring(r)).collect()
    }

    pub fn boundary_points(&self) -> Vec<GridPoint> {
        (0..self.boundary_angles)
            .map(|k| GridPoint::polar(1.0, TAU * k as f64 / self.boundary_angles as f64))
            .collect()
    }

    /// Outermost ring, then the boundary when `with_boundary`.
    pub(crate) fn sup_points(&self, with_boundary: bool) -> Vec<GridPoint> {
        let mut pts = self.ring(self.outer_radius());
        if with_boundary {
            pts.extend(self.boundary_points());
        }
        pts
    }
}

/// Estimate of `sup_{λ ∈ 𝔻} ‖F(λ)‖`. By the maximum principle the supremum is approached
/// near the circle, so only the outermost ring and (for boundary-extendable trees) the
/// boundary samples are evaluated.
pub fn sup_norm_estimate(f: &SchurFunction, grid: &SamplingGrid) -> Result<f64, SchurError> {
    sup_norm_of(|z| f.eval(z), grid, f.extends_to_boundary())
}

pub(crate) fn sup_norm_of(
    eval: impl Fn(Complex64) -> Result<ComplexMatrix, SchurError>,
    grid: &SamplingGrid,
    with_boundary: bool,
) -> Result<f64, SchurError> {
    let mut sup = 0.0f64;
    for p in grid.sup_points(with_boundary) {
        sup = sup.max(eval(p.lambda)?.norm2());
    }
    Ok(sup)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub lambda: Complex64,
}

/// A curve `t ↦ λ_t`, `t ∈ (0, 1]`, sampled at finitely many parameters. Interior
/// parameters must map into the open disc; the endpoint `t = 1` may lie on the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CurveSpec {
    /// `λ_t = t · target` at `t = 1 - 2^{-k}`, `k = 1..=depth`, then `t = 1`.
    RadialToBoundaryPoint { target: Complex64, depth: usize },
    CustomSampleList { points: Vec<CurvePoint> },
}

impl CurveSpec {
    pub fn radial(target: Complex64, depth: usize) -> Self {
        CurveSpec::RadialToBoundaryPoint { target, depth }
    }

    /// Validated samples in increasing `t`.
    pub fn samples(&self) -> Result<Vec<CurvePoint>, SchurError> {
        let pts = match self {
            CurveSpec::RadialToBoundaryPoint { target, depth } => {
                if !(target.norm() <= 1.0 + 1e-12) {
                    return Err(SchurError::BadGrid(format!("curve target {target} outside the closed disc")));
                }
                let mut pts: Vec<CurvePoint> = (1..=*depth as i32)
                    .map(|k| {
                        let t = 1.0 - 2f64.powi(-k);
                        CurvePoint { t, lambda: target * t }
                    })
                    .collect();
                pts.push(CurvePoint { t: 1.0, lambda: *target });
                pts
            }
            CurveSpec::CustomSampleList { points } => points.clone(),
        };
        if pts.is_empty() {
            return Err(SchurError::BadGrid("curve has no samples".into()));
        }
        if pts.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(SchurError::BadGrid("curve parameters must be strictly increasing".into()));
        }
        for p in &pts {
            if !(p.t > 0.0 && p.t <= 1.0) {
                return Err(SchurError::BadGrid(format!("curve parameter {} outside (0, 1]", p.t)));
            }
            let m = p.lambda.norm();
            if (p.t < 1.0 && !(m < 1.0)) || !(m <= 1.0 + 1e-12) {
                return Err(SchurError::BadGrid(format!("curve point {} at t = {} leaves the disc", p.lambda, p.t)));
            }
        }
        Ok(pts)
    }
}
