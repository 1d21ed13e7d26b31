use super::{ensure_finite, ensure_hermitian, ComplexMatrix, NumericError, Tolerances};

/// Spectral norm (largest singular value).
pub fn op_norm(m: &ComplexMatrix) -> Result<f64, NumericError> {
    ensure_finite(m)?;
    Ok(m.norm2())
}

/// PSD square root with the clip policy: eigenvalues in `[-tol_psd, 0)` become zero,
/// anything lower is an error. Eigenvalues within `tol_psd * max(1, |h|)` of zero are
/// treated as exact zeros so that roundoff does not survive as a `1e-8` square root.
pub fn psd_sqrt(h: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, NumericError> {
    ensure_hermitian(h, tol.tol_residual)?;
    let (values, vectors) = h.eigh();
    let floor = tol.tol_psd * h.norm2().max(1.0);
    if let Some(&min_eig) = values.first() {
        if min_eig < -floor {
            return Err(NumericError::NotPsd { min_eig });
        }
    }
    let roots: Vec<f64> =
        values.iter().map(|&v| if v <= floor { 0.0 } else { v.sqrt() }).collect();
    Ok(vectors.scale_columns(&roots) * vectors.adjoint())
}

/// Moore-Penrose pseudo-inverse. Singular values at or below
/// `tol_rank * max(sigma_max, 1)` are dropped.
pub fn pinv(m: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, NumericError> {
    ensure_finite(m)?;
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(ComplexMatrix::zeros(c, r));
    }
    let svd = m.svd();
    let cutoff = tol.tol_rank * svd.values[0].max(1.0);
    let inv: Vec<f64> = svd.s.iter().map(|&s| if s > cutoff { 1.0 / s } else { 0.0 }).collect();
    Ok(svd.v.scale_columns(&inv) * svd.u.adjoint())
}

/// Spectral split `h = h_plus - h_minus` into orthogonal PSD parts.
pub fn pos_neg_parts(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), NumericError> {
    ensure_hermitian(h, Tolerances::default().tol_residual)?;
    let (values, vectors) = h.eigh();
    let plus: Vec<f64> = values.iter().map(|&v| v.max(0.0)).collect();
    let minus: Vec<f64> = values.iter().map(|&v| (-v).max(0.0)).collect();
    let vs = vectors.adjoint();
    Ok((vectors.scale_columns(&plus) * &vs, vectors.scale_columns(&minus) * &vs))
}

/// Hermitian matrix `x*x` helper used by a few callers.
pub(crate) fn gram(x: &ComplexMatrix) -> ComplexMatrix {
    x.adjoint() * x
}
