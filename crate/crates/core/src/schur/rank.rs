use serde::Serialize;

use super::{GridPoint, SamplingGrid, SchurError, SchurFunction};
use crate::numeric::{defect_pair, Complex64, Tolerances};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankPoint {
    pub radius: f64,
    pub angle: f64,
    pub lambda: Complex64,
    /// `rank D_{K(λ)}`.
    pub rank: usize,
    /// `rank D_{K(λ)*}`.
    pub rank_star: usize,
}

/// Defect ranks of `K` over the grid. Interior ranks of an analytic contraction-valued
/// function are constant; boundary ranks may drop and are listed separately.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankProfile {
    pub interior: Vec<RankPoint>,
    pub boundary: Vec<RankPoint>,
    /// `(rank, rank_star)` when constant over the interior.
    pub interior_ranks: Option<(usize, usize)>,
    pub pass: bool,
}

fn rank_point(k: &SchurFunction, p: GridPoint, tol: &Tolerances) -> Result<RankPoint, SchurError> {
    let dp = defect_pair(&k.eval(p.lambda)?, tol)?;
    Ok(RankPoint { radius: p.radius, angle: p.angle, lambda: p.lambda, rank: dp.rank, rank_star: dp.rank_star })
}

pub fn rank_profile(k: &SchurFunction, grid: &SamplingGrid, tol: &Tolerances) -> Result<RankProfile, SchurError> {
    let interior =
        grid.interior_points().into_iter().map(|p| rank_point(k, p, tol)).collect::<Result<Vec<_>, _>>()?;
    let boundary = if k.extends_to_boundary() {
        grid.boundary_points().into_iter().map(|p| rank_point(k, p, tol)).collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let first = interior.first().map(|p| (p.rank, p.rank_star));
    let constant = interior.iter().all(|p| Some((p.rank, p.rank_star)) == first);
    Ok(RankProfile { interior, boundary, interior_ranks: first.filter(|_| constant), pass: constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ComplexMatrix;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ranks() {
        let grid = SamplingGrid::default();
        let tol = Tolerances::default();
        let strict =
            SchurFunction::constant(ComplexMatrix::from_real_rows(&[&[0.3, 0.1], &[0.0, 0.4]])).unwrap();
        assert_eq!(rank_profile(&strict, &grid, &tol).unwrap().interior_ranks, Some((2, 2)));

        let mixed = SchurFunction::diag(vec![
            SchurFunction::blaschke(c(0.5), 0.0).unwrap(),
            SchurFunction::scalar(c(0.5)).unwrap(),
        ])
        .unwrap();
        let rp = rank_profile(&mixed, &grid, &tol).unwrap();
        assert_eq!(rp.interior_ranks, Some((2, 2)));
        assert!(rp.boundary.iter().all(|p| p.rank == 1));

        let lin = SchurFunction::scaled_variable(c(1.0)).unwrap();
        let rp = rank_profile(&lin, &grid, &tol).unwrap();
        assert_eq!(rp.interior_ranks, Some((1, 1)));
        assert!(rp.boundary.iter().all(|p| p.rank == 0 && p.rank_star == 0));
    }
}
