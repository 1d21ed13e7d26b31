use serde::Serialize;

use super::bounds::{equiv_bounds, BoundCheck, BOUND_SLACK};
use super::{check_preceq, Contraction, Direction, PreorderError, PreorderWitness, Refusal};
use crate::numeric::{douglas_factor, sandwich_solve, ComplexMatrix, NumericError, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquivResiduals {
    /// `‖D_{A*} X̃ D_B - (A - B)‖`.
    pub x_tilde: f64,
    /// `‖D_A Ỹ D_B - (I - A*B)‖`.
    pub y_tilde: f64,
    /// `‖D_B (M* Ỹ) D_B - (I - A*B)‖` for the derived one-sided `Y`.
    pub derived_y: f64,
    /// `‖D_{A*} X' D_A - (B - A)‖` for the derived `X' = -X̃ M'`.
    pub derived_x_prime: f64,
}

/// Two-sided certificate for `A ∼ B`, with both one-sided witnesses and the operators
/// that convert between them.
#[derive(Debug, Clone, Serialize)]
pub struct EquivWitness {
    /// `A - B = D_{A*} X̃ D_B`.
    pub x_tilde: ComplexMatrix,
    /// `I - A*B = D_A Ỹ D_B`.
    pub y_tilde: ComplexMatrix,
    /// `B - A = D_{B*} X̃' D_A`.
    pub x_tilde_prime: ComplexMatrix,
    /// Witness for `A ≺ B`.
    pub forward: PreorderWitness,
    /// Witness for `B ≺ A`.
    pub backward: PreorderWitness,
    /// `M` with `D_A = M D_B`.
    pub derived_m: ComplexMatrix,
    /// `M* Ỹ`, a second `Y` for `A ≺ B` (ambient form).
    pub derived_y: ComplexMatrix,
    /// `M'` with `D_B = M' D_A`.
    pub derived_m_prime: ComplexMatrix,
    /// `-X̃ M'`, a second `X` for `B ≺ A`.
    pub derived_x_prime: ComplexMatrix,
    pub residuals: EquivResiduals,
    pub bounds: Vec<BoundCheck>,
}

fn refused(direction: Direction, residual: f64, what: &str) -> PreorderError {
    PreorderError::Refused(Refusal {
        direction,
        residual,
        message: format!("A ≁ B: {what} (residual {residual:.3e})"),
    })
}

fn tilde_solve(
    p: &ComplexMatrix,
    left: &ComplexMatrix,
    right: &ComplexMatrix,
    tol: &Tolerances,
    direction: Direction,
    what: &str,
) -> Result<ComplexMatrix, PreorderError> {
    sandwich_solve(p, left, right, tol).map_err(|e| match e {
        NumericError::NoSandwichWitness { residual } => refused(direction, residual, what),
        other => other.into(),
    })
}

fn flip(err: PreorderError) -> PreorderError {
    match err {
        PreorderError::Refused(mut r) => {
            r.direction = Direction::Backward;
            r.message = format!("B ⊀ A: no bounded X' (residual {:.3e})", r.residual);
            PreorderError::Refused(r)
        }
        other => other,
    }
}

/// Decides `A ∼ B` and assembles every witness of the two-sided characterization.
pub fn check_equiv(
    a: &Contraction,
    b: &Contraction,
    tol: &Tolerances,
) -> Result<EquivWitness, PreorderError> {
    let forward = check_preceq(a, b, tol)?;
    let backward = check_preceq(b, a, tol).map_err(flip)?;
    let diff = &a.matrix - &b.matrix;
    let x_tilde = tilde_solve(&diff, a.d_star(), b.d(), tol, Direction::TildeX, "no bounded X̃")?;
    let c = ComplexMatrix::identity(a.cols()) - a.matrix.adjoint() * &b.matrix;
    let y_tilde = tilde_solve(&c, a.d(), b.d(), tol, Direction::TildeY, "no bounded Ỹ")?;
    let x_tilde_prime =
        tilde_solve(&(-&diff), b.d_star(), a.d(), tol, Direction::TildeX, "no bounded X̃'")?;

    let derived_m = douglas_factor(a.d(), b.d(), tol)?;
    let derived_y = derived_m.adjoint() * &y_tilde;
    let derived_m_prime = douglas_factor(b.d(), a.d(), tol)?;
    let derived_x_prime = -(&x_tilde * &derived_m_prime);

    let residuals = EquivResiduals {
        x_tilde: (a.d_star() * &x_tilde * b.d() - &diff).norm2(),
        y_tilde: (a.d() * &y_tilde * b.d() - &c).norm2(),
        derived_y: (b.d() * &derived_y * b.d() - &c).norm2(),
        derived_x_prime: (a.d_star() * &derived_x_prime * a.d() + &diff).norm2(),
    };
    let mut w = EquivWitness {
        x_tilde,
        y_tilde,
        x_tilde_prime,
        forward,
        backward,
        derived_m,
        derived_y,
        derived_m_prime,
        derived_x_prime,
        residuals,
        bounds: Vec::new(),
    };
    w.bounds = equiv_bounds(&w, BOUND_SLACK.max(tol.tol_residual));
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Tolerances {
        Tolerances::default()
    }

    fn c(x: f64) -> Contraction {
        Contraction::new(ComplexMatrix::real_scalar(x), &t()).unwrap()
    }

    #[test]
    fn scalar_equivalence() {
        let w = check_equiv(&c(0.5), &c(0.3), &t()).unwrap();
        let expected = 0.2 / (0.75f64.sqrt() * 0.91f64.sqrt());
        assert!((w.x_tilde.get(0, 0).re - expected).abs() < 1e-14);
        assert!((w.x_tilde.get(0, 0).re - 0.24209).abs() < 1e-5);
        assert!(w.bounds.iter().all(|b| b.pass), "{:?}", w.bounds);
        assert!(w.residuals.derived_y < 1e-12 && w.residuals.derived_x_prime < 1e-12);
    }

    #[test]
    fn reflexive() {
        let b = Contraction::new(ComplexMatrix::from_real_rows(&[&[0.3, 0.2], &[0.1, 0.6]]), &t())
            .unwrap();
        let w = check_equiv(&b, &b, &t()).unwrap();
        assert!(w.x_tilde.norm2() < 1e-14);
        assert!((&w.y_tilde - ComplexMatrix::identity(2)).norm2() < 1e-10);
    }

    #[test]
    fn isometry_singleton() {
        let err = check_equiv(&c(1.0), &c(0.3), &t()).unwrap_err();
        assert_eq!(err.refusal().unwrap().direction, Direction::Backward);
    }
}
