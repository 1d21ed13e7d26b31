use serde::Serialize;

use crate::numeric::{defect_pair, op_norm, ComplexMatrix, DefectPair, NumericError, Tolerances};

/// Default margin below 1 for calling a contraction strict.
pub const TOL_CLASS: f64 = 1e-9;

/// A matrix with operator norm at most `1 + tol_residual`, with its defect data cached.
#[derive(Debug, Clone, Serialize)]
pub struct Contraction {
    pub matrix: ComplexMatrix,
    pub defects: DefectPair,
    pub norm: f64,
}

impl Contraction {
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self, NumericError> {
        let norm = op_norm(&matrix)?;
        if norm > 1.0 + tol.tol_residual {
            return Err(NumericError::NotContraction { norm });
        }
        let defects = defect_pair(&matrix, tol)?;
        Ok(Self { matrix, defects, norm })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// `D_C`.
    pub fn d(&self) -> &ComplexMatrix {
        &self.defects.d
    }

    /// `D_{C*}`.
    pub fn d_star(&self) -> &ComplexMatrix {
        &self.defects.d_star
    }

    pub fn adjoint(&self, tol: &Tolerances) -> Result<Self, NumericError> {
        Self::new(self.matrix.adjoint(), tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionKind {
    Strict,
    Isometry,
    CoIsometry,
    Unitary,
    BoundaryGeneric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub kind: ContractionKind,
    /// `1 - ‖C‖`.
    pub margin: f64,
}

/// Strict first, then unitary, isometry, co-isometry; anything else on the unit sphere is
/// boundary-generic.
pub fn classify(c: &Contraction, tol_class: f64) -> Classification {
    let margin = 1.0 - c.norm;
    let iso = c.defects.rank == 0;
    let coiso = c.defects.rank_star == 0;
    let kind = if c.norm <= 1.0 - tol_class {
        ContractionKind::Strict
    } else if iso && coiso {
        ContractionKind::Unitary
    } else if iso {
        ContractionKind::Isometry
    } else if coiso {
        ContractionKind::CoIsometry
    } else {
        ContractionKind::BoundaryGeneric
    };
    Classification { kind, margin }
}
