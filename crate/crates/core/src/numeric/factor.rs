use super::linalg::{gram, pinv, pos_neg_parts, psd_sqrt};
use super::{c64, ensure_finite, ComplexMatrix, NumericError, Tolerances};

/// Upper end of the delta search in [`hermitian_sandwich_witness`].
pub const DELTA_CAP: f64 = 1e6;
pub const DELTA_BISECTION_STEPS: usize = 60;

/// Solves `t = Z s` with `Z = t s^+`, so `Z` vanishes on the orthogonal complement of `Ran s`.
pub fn douglas_factor(
    t: &ComplexMatrix,
    s: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix, NumericError> {
    ensure_finite(t)?;
    ensure_finite(s)?;
    if t.cols() != s.cols() {
        return Err(NumericError::Shape(format!(
            "douglas_factor needs equal column counts, got {:?} and {:?}",
            t.shape(),
            s.shape()
        )));
    }
    let z = t * pinv(s, tol)?;
    let residual = (&z * s - t).norm2();
    if residual > tol.tol_residual {
        return Err(NumericError::NoFactor { residual });
    }
    Ok(z)
}

/// Minimal-norm solution of `p = m_left Q n_right`.
pub fn sandwich_solve(
    p: &ComplexMatrix,
    m_left: &ComplexMatrix,
    n_right: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix, NumericError> {
    ensure_finite(p)?;
    if m_left.rows() != p.rows() || n_right.cols() != p.cols() {
        return Err(NumericError::Shape(format!(
            "sandwich {:?} = {:?} Q {:?} is not compatible",
            p.shape(),
            m_left.shape(),
            n_right.shape()
        )));
    }
    let q = pinv(m_left, tol)? * p * pinv(n_right, tol)?;
    let residual = (m_left * &q * n_right - p).norm2();
    if !residual.is_finite() || residual > tol.tol_residual {
        return Err(NumericError::NoSandwichWitness { residual });
    }
    Ok(q)
}

/// Hermitian `W` with `u = d* W d`, built from the spectral split of `u` and two Douglas
/// factors: `W = delta (V+* V+ - V-* V-)` where `u_pm^(1/2) = delta^(1/2) V_pm d`.
///
/// The returned delta is the smallest bisection point with `u_+ <= delta d*d` and
/// `u_- <= delta d*d`, which implies the two-sided domination `-delta d*d <= u <= delta d*d`.
pub fn hermitian_sandwich_witness(
    u: &ComplexMatrix,
    d: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<(ComplexMatrix, f64), NumericError> {
    super::ensure_hermitian(u, tol.tol_residual)?;
    if d.cols() != u.rows() {
        return Err(NumericError::Shape(format!(
            "u is {:?} but d is {:?}",
            u.shape(),
            d.shape()
        )));
    }
    let u = u.real_part();
    let k = d.rows();
    if u.norm2() == 0.0 {
        return Ok((ComplexMatrix::zeros(k, k), 0.0));
    }
    let (u_plus, u_minus) = pos_neg_parts(&u)?;
    let dd = gram(d);
    let slack = tol.tol_residual * u.norm2().max(1.0);
    let dominated = |delta: f64| {
        let a = dd.scale_real(delta);
        (&a - &u_plus).min_eigenvalue() >= -slack && (&a - &u_minus).min_eigenvalue() >= -slack
    };
    if !dominated(DELTA_CAP) {
        return Err(NumericError::NoWitness { cap: DELTA_CAP });
    }
    let (mut lo, mut hi) = (0.0, DELTA_CAP);
    for _ in 0..DELTA_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if dominated(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let delta = hi;
    let scaled = d.scale_real(delta.sqrt());
    let v_plus = douglas_factor(&psd_sqrt(&u_plus, tol)?, &scaled, tol)?;
    let v_minus = douglas_factor(&psd_sqrt(&u_minus, tol)?, &scaled, tol)?;
    let w = (gram(&v_plus) - gram(&v_minus)).scale_real(delta);
    let residual = (d.adjoint() * &w * d - &u).norm2();
    if residual > tol.tol_residual {
        return Err(NumericError::NoSandwichWitness { residual });
    }
    Ok((w, delta))
}

/// `Z = W_re + i W_im` with `c = d* Z d`, from Hermitian witnesses for `Re c` and `Im c`.
pub fn complex_sandwich_witness(
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix, NumericError> {
    ensure_finite(c)?;
    if !c.is_square() {
        return Err(NumericError::Shape(format!("c must be square, got {:?}", c.shape())));
    }
    let (w_re, _) = hermitian_sandwich_witness(&c.real_part(), d, tol)?;
    let (w_im, _) = hermitian_sandwich_witness(&c.imag_part(), d, tol)?;
    let z = w_re + w_im.scale(c64(0.0, 1.0));
    let residual = (d.adjoint() * &z * d - c).norm2();
    if residual > tol.tol_residual {
        return Err(NumericError::NoSandwichWitness { residual });
    }
    Ok(z)
}
