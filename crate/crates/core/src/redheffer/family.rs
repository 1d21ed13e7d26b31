use super::{RedhefferCoefficients, RedhefferError};
use crate::numeric::{Complex64, ComplexMatrix};
use crate::schur::SchurFunction;

/// Degree-one inner coefficient function `Φ(λ) = [[λN, M], [-λM, N]]` with
/// `N = diag(δ_k)`, `M = diag(√(1 - δ_k²))`, together with `F₁ ≡ I` and `F₂ ≡ 0`.
///
/// `R_Φ[F₁] = diag((δ_k - λ)/(1 - λδ_k))` and `R_Φ[F₂] = N`, and the only witness `Q` with
/// `R_Φ[F₁] - R_Φ[F₂] = D_{N} Q D_{N}` is `-λ(I - λN)^{-1}`, whose supremum grows like
/// `δ/(1 - δ²)` as the largest `δ` approaches 1. So `F₁ ≺∞ F₂` is not preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalInnerFamily {
    pub deltas: Vec<f64>,
    pub coefficients: RedhefferCoefficients,
    pub f1: SchurFunction,
    pub f2: SchurFunction,
}

pub fn diagonal_inner_family(deltas: &[f64]) -> Result<DiagonalInnerFamily, RedhefferError> {
    if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
        return Err(RedhefferError::BadInput(format!("deltas must lie in (0, 1), got {deltas:?}")));
    }
    let k = deltas.len();
    let rhos: Vec<f64> = deltas.iter().map(|d| (1.0 - d * d).sqrt()).collect();
    let n = ComplexMatrix::from_real_diagonal(deltas);
    let m = ComplexMatrix::from_real_diagonal(&rhos);
    let zero = ComplexMatrix::zeros(k, k);
    let coefficients = RedhefferCoefficients::new(
        SchurFunction::poly(vec![zero.clone(), n.clone()])?,
        SchurFunction::constant(m.clone())?,
        SchurFunction::poly(vec![zero.clone(), -&m])?,
        SchurFunction::constant(n)?,
    )?;
    Ok(DiagonalInnerFamily {
        deltas: deltas.to_vec(),
        coefficients,
        f1: SchurFunction::constant(ComplexMatrix::identity(k))?,
        f2: SchurFunction::constant(zero)?,
    })
}

impl DiagonalInnerFamily {
    /// `-λ(I - λN)^{-1}`.
    pub fn expected_q(&self, lambda: Complex64) -> ComplexMatrix {
        let one = Complex64::new(1.0, 0.0);
        ComplexMatrix::from_diagonal(
            &self.deltas.iter().map(|&d| -lambda / (one - lambda * d)).collect::<Vec<_>>(),
        )
    }

    /// `δ_max/(1 - δ_max²)`, a lower bound for `sup_𝔻 ‖Q‖`.
    pub fn sup_lower_bound(&self) -> f64 {
        let d = self.deltas.iter().copied().fold(0.0, f64::max);
        d / (1.0 - d * d)
    }
}
