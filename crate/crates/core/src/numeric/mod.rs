//! Dense complex linear algebra used by every certificate in the crate.

mod defect;
mod factor;
mod linalg;
mod matrix;

pub use defect::{defect_pair, DefectPair};
pub(crate) use defect::range_basis;
pub use factor::{
    complex_sandwich_witness, douglas_factor, hermitian_sandwich_witness, sandwich_solve,
    DELTA_BISECTION_STEPS, DELTA_CAP,
};
pub use linalg::{op_norm, pinv, pos_neg_parts, psd_sqrt};
pub use matrix::ComplexMatrix;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not PSD (minimum eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },
    #[error("not a contraction (norm {norm:.12})")]
    NotContraction { norm: f64 },
    #[error("majorization fails / no factor (residual {residual:.3e})")]
    NoFactor { residual: f64 },
    #[error("no bounded sandwich witness (residual {residual:.3e})")]
    NoSandwichWitness { residual: f64 },
    #[error("no witness: domination fails for every delta up to {cap:e}")]
    NoWitness { cap: f64 },
    #[error("invalid tolerances: {0}")]
    BadTolerance(String),
}

/// Numerical thresholds shared by every routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Negative eigenvalues above `-tol_psd` are clipped to zero.
    pub tol_psd: f64,
    /// Relative rank cutoff.
    pub tol_rank: f64,
    /// Acceptance threshold for equation residuals.
    pub tol_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol_psd: 1e-12, tol_rank: 1e-10, tol_residual: 1e-8 }
    }
}

impl Tolerances {
    pub fn new(tol_psd: f64, tol_rank: f64, tol_residual: f64) -> Result<Self, NumericError> {
        let t = Self { tol_psd, tol_rank, tol_residual };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), NumericError> {
        for (name, v) in [
            ("tol_psd", self.tol_psd),
            ("tol_rank", self.tol_rank),
            ("tol_residual", self.tol_residual),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(NumericError::BadTolerance(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn ensure_finite(m: &ComplexMatrix) -> Result<(), NumericError> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(NumericError::NonFinite)
    }
}

pub(crate) fn ensure_hermitian(h: &ComplexMatrix, tol: f64) -> Result<(), NumericError> {
    ensure_finite(h)?;
    if !h.is_square() {
        return Err(NumericError::Shape(format!("expected a square matrix, got {:?}", h.shape())));
    }
    let defect = h.hermitian_defect();
    if defect > tol * h.norm2().max(1.0) {
        return Err(NumericError::NotHermitian { defect });
    }
    Ok(())
}
