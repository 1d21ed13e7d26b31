//! Redheffer linear-fractional maps `F ↦ Φ₂₂ + Φ₂₁ F (I - Φ₁₁ F)^{-1} Φ₁₂` on Schur-class
//! functions: evaluation, the defect inequalities, the factors `L` and `L_*`, transport of
//! witnesses, and the structural checks for inner coefficient functions.

mod family;
mod identities;
mod structure;
mod transport;

pub use family::{diagonal_inner_family, DiagonalInnerFamily};
pub use identities::{
    defect_inequality_check, difference_residual, factor_l_lstar, DefectInequalityReport, DifferenceReport,
    LFactors,
};
pub use structure::{
    dimension_monotonicity, inner_check, Branch, DimensionPoint, DimensionReport, InnerReport, INNER_TOL,
};
pub use transport::{
    boundary_tilde_witnesses, pullback_equiv, transport_equiv, transport_preorder, PullbackPoint,
    PullbackReport, TildeSample, TransportCertificate, TransportPoint, INVERSE_NORM_CAP, PULLBACK_TOL,
};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::numeric::{Complex64, ComplexMatrix, NumericError};
use crate::schur::{RedhefferBlocks, SchurError, SchurFunction, REDHEFFER_COND_CAP};

/// Margin for the domain condition `‖Φ₁₁(0) F(0)‖ < 1`.
pub const TOL_DOMAIN: f64 = 1e-9;
/// Condition-number ceiling standing in for "has a bounded analytic inverse".
pub const INVERTIBILITY_COND_CAP: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RedhefferError {
    #[error("outside Redheffer domain: ‖Φ₁₁(0)F(0)‖ = {norm:.12} is not below 1 - {margin:e}")]
    OutsideDomain { norm: f64, margin: f64 },
    #[error("domain conditions disagree for an equivalent pair: {first:.12} vs {second:.12}")]
    DomainAsymmetry { first: f64, second: f64 },
    #[error("input pair refused: {0}")]
    Refused(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("factor extraction failed at λ = {lambda}: {source}")]
    Factor { lambda: Complex64, source: NumericError },
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Schur(#[from] SchurError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Coefficient function `Φ = [Φ₁₁ Φ₁₂; Φ₂₁ Φ₂₂]` from `𝓔' ⊕ 𝓤` to `𝓔 ⊕ 𝓨`.
#[derive(Debug, Clone, PartialEq)]
pub struct RedhefferCoefficients {
    blocks: RedhefferBlocks,
    assembled: SchurFunction,
}

/// Values of the four blocks at one point.
#[derive(Debug, Clone)]
pub struct BlockValues {
    pub p11: ComplexMatrix,
    pub p12: ComplexMatrix,
    pub p21: ComplexMatrix,
    pub p22: ComplexMatrix,
}

impl RedhefferCoefficients {
    pub fn new(
        phi11: SchurFunction,
        phi12: SchurFunction,
        phi21: SchurFunction,
        phi22: SchurFunction,
    ) -> Result<Self, RedhefferError> {
        let assembled = SchurFunction::block2x2([[phi11.clone(), phi12.clone()], [phi21.clone(), phi22.clone()]])?;
        Ok(Self { blocks: RedhefferBlocks { phi11, phi12, phi21, phi22 }, assembled })
    }

    /// Splits a constant contraction after `e` rows and `e_prime` columns.
    pub fn constant(phi: &ComplexMatrix, e: usize, e_prime: usize) -> Result<Self, RedhefferError> {
        let (rows, cols) = phi.shape();
        if e > rows || e_prime > cols {
            return Err(RedhefferError::BadInput(format!("cannot split {rows}x{cols} at ({e}, {e_prime})")));
        }
        let (y, u) = (rows - e, cols - e_prime);
        let c = |r0, c0, nr, nc| SchurFunction::constant(phi.submatrix(r0, c0, nr, nc));
        Self::new(c(0, 0, e, e_prime)?, c(0, e_prime, e, u)?, c(e, 0, y, e_prime)?, c(e, e_prime, y, u)?)
    }

    /// `[[0, I], [I, 0]]`, for which the map is the identity.
    pub fn swap(n: usize) -> Result<Self, RedhefferError> {
        let (z, i) = (ComplexMatrix::zeros(n, n), ComplexMatrix::identity(n));
        Self::constant(&ComplexMatrix::block2x2(&z, &i, &i, &z)?, n, n)
    }

    pub fn blocks(&self) -> &RedhefferBlocks {
        &self.blocks
    }

    pub fn assembled(&self) -> &SchurFunction {
        &self.assembled
    }

    /// `(dim 𝓔, dim 𝓔', dim 𝓤, dim 𝓨)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        let b = &self.blocks;
        (b.phi11.out_dim(), b.phi11.in_dim(), b.phi12.in_dim(), b.phi21.out_dim())
    }

    pub fn eval_blocks(&self, lambda: Complex64) -> Result<BlockValues, SchurError> {
        let b = &self.blocks;
        Ok(BlockValues {
            p11: b.phi11.eval(lambda)?,
            p12: b.phi12.eval(lambda)?,
            p21: b.phi21.eval(lambda)?,
            p22: b.phi22.eval(lambda)?,
        })
    }

    pub fn extends_to_boundary(&self) -> bool {
        self.assembled.extends_to_boundary()
    }

    /// `‖Φ₁₁(0) F(0)‖`.
    pub fn domain_norm(&self, f: &SchurFunction) -> Result<f64, RedhefferError> {
        self.check_shape(f)?;
        let zero = Complex64::new(0.0, 0.0);
        Ok((self.blocks.phi11.eval(zero)? * f.eval(zero)?).norm2())
    }

    fn check_shape(&self, f: &SchurFunction) -> Result<(), RedhefferError> {
        let (e, e_prime, _, _) = self.dims();
        if f.shape() != (e_prime, e) {
            return Err(RedhefferError::BadInput(format!(
                "F must map a {e}-space to a {e_prime}-space, got shape {:?}",
                f.shape()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_domain(&self, f: &SchurFunction) -> Result<f64, RedhefferError> {
        let norm = self.domain_norm(f)?;
        if !(norm < 1.0 - TOL_DOMAIN) {
            return Err(RedhefferError::OutsideDomain { norm, margin: TOL_DOMAIN });
        }
        Ok(norm)
    }
}

impl BlockValues {
    /// `(I - Φ₁₁ K)^{-1}` on `𝓔`.
    pub fn inv_left(&self, k: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix, SchurError> {
        guarded_inverse(&(ComplexMatrix::identity(self.p11.rows()) - &self.p11 * k), lambda)
    }

    /// `(I - K Φ₁₁)^{-1}` on `𝓔'`.
    pub fn inv_right(&self, k: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix, SchurError> {
        guarded_inverse(&(ComplexMatrix::identity(self.p11.cols()) - k * &self.p11), lambda)
    }

    /// `R_Φ[K]` at this point.
    pub fn map(&self, k: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix, SchurError> {
        crate::schur::redheffer_value(&self.p11, &self.p12, &self.p21, &self.p22, k, lambda)
    }
}

pub(crate) fn guarded_inverse(m: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix, SchurError> {
    let cond = m.condition_number();
    if !(cond <= REDHEFFER_COND_CAP) {
        return Err(SchurError::Singular { lambda, cond });
    }
    m.inverse().ok_or(SchurError::Singular { lambda, cond })
}

/// `R_Φ[F]` as a Schur function. Requires `‖Φ₁₁(0) F(0)‖ < 1 - TOL_DOMAIN`; the result is
/// re-validated for contractivity like any other tree.
pub fn apply(phi: &RedhefferCoefficients, f: &SchurFunction) -> Result<SchurFunction, RedhefferError> {
    phi.require_domain(f)?;
    Ok(SchurFunction::redheffer(phi.blocks.clone(), f.clone())?)
}

impl Serialize for RedhefferCoefficients {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RedhefferCoefficients {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let b = RedhefferBlocks::deserialize(deserializer)?;
        Self::new(b.phi11, b.phi12, b.phi21, b.phi22).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_contraction, rng};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn swap_is_identity_map() {
        let phi = RedhefferCoefficients::swap(1).unwrap();
        let b = SchurFunction::blaschke(c(0.3), 0.4).unwrap();
        let r = apply(&phi, &b).unwrap();
        for z in [c(0.2), Complex64::new(-0.5, 0.6), c(1.0)] {
            assert!((r.eval(z).unwrap() - b.eval(z).unwrap()).norm2() < 1e-15);
        }
    }

    #[test]
    fn zero_maps_to_lower_right_block() {
        let mut g = rng(3);
        let m = random_contraction(&mut g, 4, 4, 0.95);
        let phi = RedhefferCoefficients::constant(&m, 2, 2).unwrap();
        let zero = SchurFunction::constant(ComplexMatrix::zeros(2, 2)).unwrap();
        let r = apply(&phi, &zero).unwrap();
        assert_eq!(r.eval(c(0.1)).unwrap(), m.submatrix(2, 2, 2, 2));
    }

    #[test]
    fn one_mode_family_value() {
        let fam = diagonal_inner_family(&[0.8]).unwrap();
        let g1 = apply(&fam.coefficients, &fam.f1).unwrap();
        assert!((g1.eval(c(0.5)).unwrap().get(0, 0) - c(0.5)).norm() < 1e-14);
    }

    #[test]
    fn domain_refusal() {
        let phi = RedhefferCoefficients::constant(&ComplexMatrix::from_real_diagonal(&[1.0, 1.0]), 1, 1).unwrap();
        let one = SchurFunction::scalar(c(1.0)).unwrap();
        assert!(matches!(apply(&phi, &one), Err(RedhefferError::OutsideDomain { .. })));
    }

    #[test]
    fn json_round_trip() {
        let fam = diagonal_inner_family(&[0.5, 0.75]).unwrap();
        let s = serde_json::to_string(&fam.coefficients).unwrap();
        assert!(s.starts_with(r#"{"phi11":{"kind":"poly""#));
        let back: RedhefferCoefficients = serde_json::from_str(&s).unwrap();
        assert_eq!(back, fam.coefficients);
    }
}
