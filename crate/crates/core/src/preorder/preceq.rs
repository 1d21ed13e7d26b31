use std::f64::consts::TAU;

use serde::Serialize;

use super::bounds::{preorder_bounds, BoundCheck};
use super::{Contraction, Direction, PreorderError, Refusal};
use crate::numeric::{
    douglas_factor, psd_sqrt, sandwich_solve, Complex64, ComplexMatrix, NumericError, Tolerances,
};

pub const DEFAULT_SEGMENT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessResiduals {
    /// `‖D_{B*} X D_B - (A - B)‖`.
    pub x: f64,
    /// `‖D_B Y D_B - (I - A*B)‖` with `Y` lifted back to the ambient space.
    pub y: f64,
    /// Smallest eigenvalue of `2 Re(Y) - I`; zero when the defect space is trivial.
    pub min_eig_2re_y_minus_i: f64,
}

/// Certificate for `A ≺ B`.
///
/// `x` is the ambient matrix of `X: 𝒟_B → 𝒟_{B*}` (zero off `𝒟_B`). `y` is `Y` in the
/// coordinates of `y_basis`, an orthonormal basis of `𝒟_B`.
#[derive(Debug, Clone, Serialize)]
pub struct PreorderWitness {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub r: f64,
    pub residuals: WitnessResiduals,
    pub bounds: Vec<BoundCheck>,
    pub y_basis: ComplexMatrix,
}

impl PreorderWitness {
    /// `Y` as an operator on the full input space, zero off `𝒟_B`.
    pub fn y_ambient(&self) -> ComplexMatrix {
        &self.y_basis * &self.y * self.y_basis.adjoint()
    }
}

fn check_shapes(a: &Contraction, b: &Contraction) -> Result<(), PreorderError> {
    if a.matrix.shape() != b.matrix.shape() {
        return Err(NumericError::Shape(format!(
            "A is {:?} but B is {:?}",
            a.matrix.shape(),
            b.matrix.shape()
        ))
        .into());
    }
    Ok(())
}

/// Decides `A ≺ B` through the minimal-norm solution of `A - B = D_{B*} X D_B`.
pub fn check_preceq(
    a: &Contraction,
    b: &Contraction,
    tol: &Tolerances,
) -> Result<PreorderWitness, PreorderError> {
    check_shapes(a, b)?;
    let diff = &a.matrix - &b.matrix;
    let x = match sandwich_solve(&diff, b.d_star(), b.d(), tol) {
        Ok(x) => x,
        Err(NumericError::NoSandwichWitness { residual }) => {
            return Err(PreorderError::Refused(Refusal {
                direction: Direction::Forward,
                residual,
                message: format!("A ⊀ B: no bounded X (residual {residual:.3e})"),
            }))
        }
        Err(e) => return Err(e.into()),
    };
    let y = y_from_x(&x, b);
    let e = &b.defects.basis;
    let residual_x = (b.d_star() * &x * b.d() - &diff).norm2();
    let lhs = ComplexMatrix::identity(a.cols()) - a.matrix.adjoint() * &b.matrix;
    let residual_y = (b.d() * e * &y * e.adjoint() * b.d() - &lhs).norm2();
    let min_eig = two_re_minus_i(&y).min_eigenvalue();
    let min_eig = if min_eig.is_finite() { min_eig } else { 0.0 };
    let r = radius_from_y(&y, tol)?;
    let bounds = preorder_bounds(&x, &y, r, tol.tol_residual);
    Ok(PreorderWitness {
        x,
        y,
        r,
        residuals: WitnessResiduals { x: residual_x, y: residual_y, min_eig_2re_y_minus_i: min_eig },
        bounds,
        y_basis: e.clone(),
    })
}

/// `Y = I - X*B` compressed to `𝒟_B`, for an ambient `X` supported on `𝒟_B`.
pub fn y_from_x(x: &ComplexMatrix, b: &Contraction) -> ComplexMatrix {
    let e = &b.defects.basis;
    let k = e.cols();
    ComplexMatrix::identity(k) - e.adjoint() * x.adjoint() * &b.matrix * e
}

fn two_re_minus_i(y: &ComplexMatrix) -> ComplexMatrix {
    y.real_part().scale_real(2.0) - ComplexMatrix::identity(y.rows())
}

/// Operators produced by the Douglas step on `D_B (2Re Y - I) D_B = D_A² + (A-B)*(A-B)`.
#[derive(Debug, Clone)]
pub struct DefectFactors {
    /// `N` with `N D_B = D_A` (as a map from `𝒟_B` coordinates).
    pub n: ComplexMatrix,
    /// `M` with `M D_B = A - B`.
    pub m: ComplexMatrix,
    /// `X = D_{B*} M + B(I - Y*)` in ambient form.
    pub x: ComplexMatrix,
}

/// Rebuilds `X` from a compressed `Y`; also returns the intermediate `N` and `M`.
pub fn defect_factors(
    a: &Contraction,
    b: &Contraction,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<DefectFactors, PreorderError> {
    check_shapes(a, b)?;
    let e = &b.defects.basis;
    if y.shape() != (e.cols(), e.cols()) {
        return Err(NumericError::Shape(format!(
            "Y must be {0}x{0} on the defect space, got {1:?}",
            e.cols(),
            y.shape()
        ))
        .into());
    }
    let h = two_re_minus_i(y);
    let min_eig = h.min_eigenvalue();
    if min_eig < -tol.tol_residual {
        return Err(PreorderError::Indefinite { min_eig });
    }
    let h_half = psd_sqrt(&h.real_part(), tol)?;
    let s = &h_half * e.adjoint() * b.d();
    let diff = &a.matrix - &b.matrix;
    let t = ComplexMatrix::vstack(a.d(), &diff)?;
    let z = douglas_factor(&t, &s, tol).map_err(|err| match err {
        NumericError::NoFactor { residual } => PreorderError::InconsistentY { residual },
        other => other.into(),
    })?;
    let n_dim = a.cols();
    let n = z.submatrix(0, 0, n_dim, z.cols()) * &h_half;
    let m = z.submatrix(n_dim, 0, diff.rows(), z.cols()) * &h_half;
    let k = e.cols();
    let x = (b.d_star() * &m + &b.matrix * e * (ComplexMatrix::identity(k) - y.adjoint()))
        * e.adjoint();
    let residual = (b.d_star() * &x * b.d() - &diff).norm2();
    if residual > tol.tol_residual {
        return Err(PreorderError::InconsistentY { residual });
    }
    Ok(DefectFactors { n, m, x })
}

/// `X = D_{B*} M + B(I - Y*)` from a compressed `Y` satisfying `I - A*B = D_B Y D_B`.
pub fn x_from_y(
    a: &Contraction,
    b: &Contraction,
    y: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix, PreorderError> {
    defect_factors(a, b, y, tol).map(|f| f.x)
}

/// `1 / (‖Y‖ + sqrt(‖Y‖² + 2‖Re Y‖ - 1))`, with the `2‖Re Y‖ - 1` term floored at zero.
///
/// An empty `Y` (trivial defect space) is read as the identity.
pub fn radius_from_y(y: &ComplexMatrix, tol: &Tolerances) -> Result<f64, PreorderError> {
    if y.rows() == 0 {
        return Ok(1.0 / (1.0 + 2f64.sqrt()));
    }
    let min_eig = two_re_minus_i(y).min_eigenvalue();
    if min_eig < -tol.tol_residual {
        return Err(PreorderError::Indefinite { min_eig });
    }
    let ny = y.norm2();
    let excess = (2.0 * y.real_part().norm2() - 1.0).max(0.0);
    Ok(1.0 / (ny + (ny * ny + excess).sqrt()))
}

#[derive(Debug, Clone, Serialize)]
pub struct SegmentReport {
    pub pass: bool,
    pub max_norm: f64,
    pub argmax_eps: Complex64,
    pub samples: usize,
}

/// Samples `‖(1 - ε)B + εA‖` on `|ε| = r` and `|ε| = r/2`.
pub fn segment_check(
    a: &Contraction,
    b: &Contraction,
    r: f64,
    n_samples: usize,
    tol: &Tolerances,
) -> SegmentReport {
    let n = n_samples.max(8);
    let mut max_norm = f64::NEG_INFINITY;
    let mut argmax = Complex64::new(0.0, 0.0);
    for radius in [r, 0.5 * r] {
        for k in 0..n {
            let eps = Complex64::from_polar(radius, TAU * k as f64 / n as f64);
            let t = b.matrix.scale(Complex64::new(1.0, 0.0) - eps) + a.matrix.scale(eps);
            let norm = t.norm2();
            if norm > max_norm {
                max_norm = norm;
                argmax = eps;
            }
        }
    }
    SegmentReport { pass: max_norm <= 1.0 + tol.tol_residual, max_norm, argmax_eps: argmax, samples: 2 * n }
}

/// `(1 - 2Re ε) D_B² + 2Re ε Re(I - A*B) + 2Im ε Im(I - A*B) - |ε|² (A-B)*(A-B)`,
/// which equals `I - T*T` for `T = (1 - ε)B + εA`.
pub fn epsilon_defect(a: &Contraction, b: &Contraction, eps: Complex64) -> ComplexMatrix {
    let n = b.cols();
    let id = ComplexMatrix::identity(n);
    let db2 = &id - b.matrix.adjoint() * &b.matrix;
    let c = &id - a.matrix.adjoint() * &b.matrix;
    let diff = &a.matrix - &b.matrix;
    db2.scale_real(1.0 - 2.0 * eps.re)
        + c.real_part().scale_real(2.0 * eps.re)
        + c.imag_part().scale_real(2.0 * eps.im)
        - (diff.adjoint() * &diff).scale_real(eps.norm_sqr())
}
