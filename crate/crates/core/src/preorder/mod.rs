//! The pre-order `A ≺ B` and equivalence `A ∼ B` on matrix contractions.
//!
//! `A ≺ B` means `A - B = D_{B*} X D_B` for some `X`; equivalently `I - A*B = D_B Y D_B`,
//! or the segment `(1 - ε)B + εA` stays contractive for all small `|ε|`.

mod bounds;
mod contraction;
mod equiv;
mod preceq;

pub use bounds::{verify_bounds, BoundCheck, BoundReport, WitnessRef};
pub use contraction::{classify, Classification, ContractionKind, Contraction, TOL_CLASS};
pub use equiv::{check_equiv, EquivResiduals, EquivWitness};
pub use preceq::{
    check_preceq, defect_factors, epsilon_defect, radius_from_y, segment_check, x_from_y,
    y_from_x, DefectFactors, PreorderWitness, SegmentReport, WitnessResiduals,
    DEFAULT_SEGMENT_SAMPLES,
};

use serde::Serialize;
use thiserror::Error;

use crate::numeric::NumericError;

/// Which relation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `A ≺ B` fails.
    Forward,
    /// `B ≺ A` fails.
    Backward,
    /// The two-sided `A - B = D_{A*} X̃ D_B` sandwich fails.
    TildeX,
    /// The two-sided `I - A*B = D_A Ỹ D_B` sandwich fails.
    TildeY,
}

/// A failed certificate: the minimal-norm sandwich left this residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refusal {
    pub direction: Direction,
    pub residual: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PreorderError {
    #[error("{}", .0.message)]
    Refused(Refusal),
    #[error("2 Re(Y) - I is indefinite (minimum eigenvalue {min_eig:.3e})")]
    Indefinite { min_eig: f64 },
    #[error("inconsistent Y (residual {residual:.3e})")]
    InconsistentY { residual: f64 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl PreorderError {
    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            PreorderError::Refused(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_refusal(&self) -> bool {
        self.refusal().is_some()
    }
}
