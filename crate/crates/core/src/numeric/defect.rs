use serde::Serialize;

use super::{ensure_finite, ComplexMatrix, NumericError, Tolerances};

/// Defect operators of a contraction `C` together with orthonormal bases of their ranges.
#[derive(Debug, Clone, Serialize)]
pub struct DefectPair {
    /// `D_C = (I - C*C)^(1/2)`.
    pub d: ComplexMatrix,
    /// `D_{C*} = (I - CC*)^(1/2)`.
    pub d_star: ComplexMatrix,
    /// Orthonormal columns spanning the range of `d`.
    pub basis: ComplexMatrix,
    /// Orthonormal columns spanning the range of `d_star`.
    pub basis_star: ComplexMatrix,
    pub rank: usize,
    pub rank_star: usize,
    /// Absolute eigenvalue cutoff used for both ranks.
    pub tol_used: f64,
}

/// Builds `D_C` and `D_{C*}` from one SVD of `c`.
///
/// With `C = U diag(s) V*` (thin), `D_C = I - V diag(1 - sqrt(1 - s^2)) V*` and likewise for
/// `D_{C*}` with `U`. This keeps `C D_C = D_{C*} C` exact up to the SVD's own roundoff.
/// Values of `1 - s^2` within `tol_psd` of zero are snapped to zero.
pub fn defect_pair(c: &ComplexMatrix, tol: &Tolerances) -> Result<DefectPair, NumericError> {
    ensure_finite(c)?;
    let (m, n) = c.shape();
    let (d, d_star) = if m == 0 || n == 0 {
        (ComplexMatrix::identity(n), ComplexMatrix::identity(m))
    } else {
        let svd = c.svd();
        let norm = svd.values[0];
        if norm > 1.0 + tol.tol_residual {
            return Err(NumericError::NotContraction { norm });
        }
        let shrink: Vec<f64> = svd
            .s
            .iter()
            .map(|&sv| {
                let gap = 1.0 - sv * sv;
                let root = if gap <= tol.tol_psd { 0.0 } else { gap.sqrt() };
                1.0 - root
            })
            .collect();
        let (u, v) = (&svd.u, &svd.v);
        let d = ComplexMatrix::identity(n) - v.scale_columns(&shrink) * v.adjoint();
        let d_star = ComplexMatrix::identity(m) - u.scale_columns(&shrink) * u.adjoint();
        (d.real_part(), d_star.real_part())
    };
    let cutoff = tol.tol_rank * d.norm2().max(d_star.norm2()).max(1.0);
    let basis = range_basis(&d, cutoff);
    let basis_star = range_basis(&d_star, cutoff);
    Ok(DefectPair {
        rank: basis.cols(),
        rank_star: basis_star.cols(),
        d,
        d_star,
        basis,
        basis_star,
        tol_used: cutoff,
    })
}

/// Eigenvectors of a PSD matrix whose eigenvalues exceed `cutoff`.
pub(crate) fn range_basis(h: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let (values, vectors) = h.eigh();
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k] > cutoff).collect();
    vectors.select_columns(&keep)
}
