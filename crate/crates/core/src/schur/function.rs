use std::f64::consts::TAU;
use std::sync::Arc;

use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SchurError;
use crate::numeric::{Complex64, ComplexMatrix};
use crate::random::rng;

/// Number of random interior validation points.
pub const VALIDATION_POINTS: usize = 20;
/// Maximum modulus of the random validation points.
pub const VALIDATION_RADIUS: f64 = 0.99;
/// Construction accepts values with norm up to `1 + VALIDATION_TOL`.
pub const VALIDATION_TOL: f64 = 1e-8;
/// Condition-number ceiling for `I - Φ₁₁ F` inside a Redheffer node.
pub const REDHEFFER_COND_CAP: f64 = 1e12;
const VALIDATION_SEED: u64 = 0x5c4u64;
const OUTER_RING_ANGLES: usize = 64;

/// Blocks of a 2x2 partitioned coefficient function `Φ = [Φ₁₁ Φ₁₂; Φ₂₁ Φ₂₂]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedhefferBlocks {
    pub phi11: SchurFunction,
    pub phi12: SchurFunction,
    pub phi21: SchurFunction,
    pub phi22: SchurFunction,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(ComplexMatrix),
    /// `c_0 + c_1 λ + ... + c_d λ^d`.
    Poly(Vec<ComplexMatrix>),
    /// `e^{-iα} (ω - λ) / (1 - conj(ω) λ)`.
    Blaschke { omega: Complex64, alpha: f64 },
    /// Block-diagonal direct sum.
    Diag(Vec<SchurFunction>),
    /// `[[f11, f12], [f21, f22]]`.
    Block2x2(Box<[[SchurFunction; 2]; 2]>),
    /// `D + λ C (I - λ A)^{-1} B`; `rho` caches the spectral radius of `A`.
    Realization { a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix, d: ComplexMatrix, rho: f64 },
    /// `Φ₂₂ + Φ₂₁ F (I - Φ₁₁ F)^{-1} Φ₁₂`.
    Redheffer { phi: Box<RedhefferBlocks>, f: SchurFunction },
}

/// Matrix-valued analytic function on the unit disc with contractive values, given as a
/// constructor tree. Values map `in_dim`-vectors to `out_dim`-vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurFunction {
    node: Arc<Node>,
    in_dim: usize,
    out_dim: usize,
}

impl SchurFunction {
    /// Validates the tree and samples it for contractivity.
    pub fn new(node: Node) -> Result<Self, SchurError> {
        let (out_dim, in_dim) = shape_of(&node)?;
        let f = Self { node: Arc::new(node), in_dim, out_dim };
        f.validate_contractive()?;
        Ok(f)
    }

    pub fn constant(m: ComplexMatrix) -> Result<Self, SchurError> {
        Self::new(Node::Const(m))
    }

    pub fn poly(coeffs: Vec<ComplexMatrix>) -> Result<Self, SchurError> {
        Self::new(Node::Poly(coeffs))
    }

    pub fn blaschke(omega: Complex64, alpha: f64) -> Result<Self, SchurError> {
        Self::new(Node::Blaschke { omega, alpha })
    }

    pub fn diag(entries: Vec<SchurFunction>) -> Result<Self, SchurError> {
        Self::new(Node::Diag(entries))
    }

    pub fn block2x2(blocks: [[SchurFunction; 2]; 2]) -> Result<Self, SchurError> {
        Self::new(Node::Block2x2(Box::new(blocks)))
    }

    pub fn realization(
        a: ComplexMatrix,
        b: ComplexMatrix,
        c: ComplexMatrix,
        d: ComplexMatrix,
    ) -> Result<Self, SchurError> {
        let rho = a.spectral_radius();
        Self::new(Node::Realization { a, b, c, d, rho })
    }

    pub(crate) fn redheffer(phi: RedhefferBlocks, f: SchurFunction) -> Result<Self, SchurError> {
        Self::new(Node::Redheffer { phi: Box::new(phi), f })
    }

    /// Scalar constant.
    pub fn scalar(z: Complex64) -> Result<Self, SchurError> {
        Self::constant(ComplexMatrix::scalar(z))
    }

    /// Scalar `λ ↦ c λ`.
    pub fn scaled_variable(c: Complex64) -> Result<Self, SchurError> {
        Self::poly(vec![ComplexMatrix::zeros(1, 1), ComplexMatrix::scalar(c)])
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Whether every node extends continuously to the closed disc.
    pub fn extends_to_boundary(&self) -> bool {
        match &*self.node {
            Node::Const(_) | Node::Poly(_) | Node::Blaschke { .. } => true,
            Node::Diag(es) => es.iter().all(Self::extends_to_boundary),
            Node::Block2x2(b) => b.iter().flatten().all(Self::extends_to_boundary),
            Node::Realization { rho, .. } => *rho < 1.0 - 1e-12,
            Node::Redheffer { phi, f } => {
                [&phi.phi11, &phi.phi12, &phi.phi21, &phi.phi22, f]
                    .iter()
                    .all(|g| g.extends_to_boundary())
            }
        }
    }

    /// The value at `λ`. Points with `|λ| = 1` need a boundary-extendable tree.
    pub fn eval(&self, lambda: Complex64) -> Result<ComplexMatrix, SchurError> {
        let modulus = lambda.norm();
        if !modulus.is_finite() || modulus > 1.0 + 1e-12 {
            return Err(SchurError::Domain { lambda });
        }
        if modulus >= 1.0 && !self.extends_to_boundary() {
            return Err(SchurError::Domain { lambda });
        }
        self.eval_unchecked(lambda)
    }

    fn eval_unchecked(&self, lambda: Complex64) -> Result<ComplexMatrix, SchurError> {
        match &*self.node {
            Node::Const(m) => Ok(m.clone()),
            Node::Poly(cs) => {
                let mut acc = ComplexMatrix::zeros(self.out_dim, self.in_dim);
                for c in cs.iter().rev() {
                    acc = acc.scale(lambda) + c;
                }
                Ok(acc)
            }
            Node::Blaschke { omega, alpha } => {
                let phase = Complex64::from_polar(1.0, -alpha);
                let den = Complex64::new(1.0, 0.0) - omega.conj() * lambda;
                Ok(ComplexMatrix::scalar(phase * (omega - lambda) / den))
            }
            Node::Diag(es) => {
                let vals = es.iter().map(|e| e.eval_unchecked(lambda)).collect::<Result<Vec<_>, _>>()?;
                Ok(ComplexMatrix::block_diag(&vals))
            }
            Node::Block2x2(b) => {
                let [[f11, f12], [f21, f22]] = &**b;
                Ok(ComplexMatrix::block2x2(
                    &f11.eval_unchecked(lambda)?,
                    &f12.eval_unchecked(lambda)?,
                    &f21.eval_unchecked(lambda)?,
                    &f22.eval_unchecked(lambda)?,
                )?)
            }
            Node::Realization { a, b, c, d, .. } => {
                let m = ComplexMatrix::identity(a.rows()) - a.scale(lambda);
                let x = m.solve(b).ok_or(SchurError::Singular { lambda, cond: f64::INFINITY })?;
                Ok(d + (c * x).scale(lambda))
            }
            Node::Redheffer { phi, f } => {
                let fv = f.eval_unchecked(lambda)?;
                redheffer_value(
                    &phi.phi11.eval_unchecked(lambda)?,
                    &phi.phi12.eval_unchecked(lambda)?,
                    &phi.phi21.eval_unchecked(lambda)?,
                    &phi.phi22.eval_unchecked(lambda)?,
                    &fv,
                    lambda,
                )
            }
        }
    }

    fn validate_contractive(&self) -> Result<(), SchurError> {
        let mut r = rng(VALIDATION_SEED);
        let mut points: Vec<Complex64> = (0..VALIDATION_POINTS)
            .map(|_| {
                let rad = VALIDATION_RADIUS * r.gen::<f64>().sqrt();
                Complex64::from_polar(rad, r.gen_range(0.0..TAU))
            })
            .collect();
        let outer = 1.0 - 2f64.powi(-10);
        points.extend(
            (0..OUTER_RING_ANGLES).map(|k| Complex64::from_polar(outer, TAU * k as f64 / OUTER_RING_ANGLES as f64)),
        );
        for lambda in points {
            let norm = self.eval_unchecked(lambda)?.norm2();
            if !(norm <= 1.0 + VALIDATION_TOL) {
                return Err(SchurError::NotContractive { norm, lambda });
            }
        }
        Ok(())
    }
}

/// `Φ₂₂ + Φ₂₁ F (I - Φ₁₁ F)^{-1} Φ₁₂` at one point, refusing near-singular `I - Φ₁₁ F`.
pub fn redheffer_value(
    p11: &ComplexMatrix,
    p12: &ComplexMatrix,
    p21: &ComplexMatrix,
    p22: &ComplexMatrix,
    f: &ComplexMatrix,
    lambda: Complex64,
) -> Result<ComplexMatrix, SchurError> {
    let m = ComplexMatrix::identity(p11.rows()) - p11 * f;
    let cond = m.condition_number();
    if !(cond <= REDHEFFER_COND_CAP) {
        return Err(SchurError::Singular { lambda, cond });
    }
    let x = m.solve(p12).ok_or(SchurError::Singular { lambda, cond })?;
    Ok(p22 + p21 * f * x)
}

fn shape_of(node: &Node) -> Result<(usize, usize), SchurError> {
    let bad = |msg: String| Err(SchurError::Invalid(msg));
    match node {
        Node::Const(m) => Ok(m.shape()),
        Node::Poly(cs) => {
            let Some(first) = cs.first() else {
                return bad("poly needs at least one coefficient".into());
            };
            if cs.iter().any(|c| c.shape() != first.shape()) {
                return bad("poly coefficients must share one shape".into());
            }
            Ok(first.shape())
        }
        Node::Blaschke { omega, alpha } => {
            if !(omega.norm() < 1.0) || !alpha.is_finite() {
                return bad(format!("blaschke needs |omega| < 1 and finite alpha, got {omega}, {alpha}"));
            }
            Ok((1, 1))
        }
        Node::Diag(es) => {
            if es.is_empty() {
                return bad("diag needs at least one entry".into());
            }
            Ok(es.iter().fold((0, 0), |(r, c), e| (r + e.out_dim, c + e.in_dim)))
        }
        Node::Block2x2(b) => {
            let [[f11, f12], [f21, f22]] = &**b;
            if f11.out_dim != f12.out_dim
                || f21.out_dim != f22.out_dim
                || f11.in_dim != f21.in_dim
                || f12.in_dim != f22.in_dim
            {
                return bad("block2x2 blocks have incompatible shapes".into());
            }
            Ok((f11.out_dim + f21.out_dim, f11.in_dim + f12.in_dim))
        }
        Node::Realization { a, b, c, d, rho } => {
            let n = a.rows();
            if !a.is_square() || b.rows() != n || c.cols() != n || d.rows() != c.rows() || d.cols() != b.cols()
            {
                return bad(format!(
                    "realization shapes a {:?} b {:?} c {:?} d {:?} do not fit",
                    a.shape(),
                    b.shape(),
                    c.shape(),
                    d.shape()
                ));
            }
            if !(*rho <= 1.0 + 1e-12) {
                return bad(format!("realization needs spectral radius of A at most 1, got {rho}"));
            }
            Ok(d.shape())
        }
        Node::Redheffer { phi, f } => {
            let (e, e_prime) = (phi.phi11.out_dim, phi.phi11.in_dim);
            let (u, y) = (phi.phi12.in_dim, phi.phi21.out_dim);
            if phi.phi12.out_dim != e
                || phi.phi21.in_dim != e_prime
                || phi.phi22.shape() != (y, u)
                || f.shape() != (e_prime, e)
            {
                return bad("redheffer coefficient blocks do not fit the partition".into());
            }
            Ok((y, u))
        }
    }
}

impl SchurFunction {
    /// `(out_dim, in_dim)`, the shape of every value.
    pub fn shape(&self) -> (usize, usize) {
        (self.out_dim, self.in_dim)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Wire {
    Const { value: ComplexMatrix },
    Poly { coeffs: Vec<ComplexMatrix> },
    Blaschke { omega: [f64; 2], alpha: f64 },
    Diag { entries: Vec<SchurFunction> },
    Block2x2 { blocks: [[SchurFunction; 2]; 2] },
    Realization { a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix, d: ComplexMatrix },
    Redheffer {
        phi11: SchurFunction,
        phi12: SchurFunction,
        phi21: SchurFunction,
        phi22: SchurFunction,
        f: SchurFunction,
    },
}

impl Serialize for SchurFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = match &*self.node {
            Node::Const(m) => Wire::Const { value: m.clone() },
            Node::Poly(cs) => Wire::Poly { coeffs: cs.clone() },
            Node::Blaschke { omega, alpha } => Wire::Blaschke { omega: [omega.re, omega.im], alpha: *alpha },
            Node::Diag(es) => Wire::Diag { entries: es.clone() },
            Node::Block2x2(b) => Wire::Block2x2 { blocks: (**b).clone() },
            Node::Realization { a, b, c, d, .. } => {
                Wire::Realization { a: a.clone(), b: b.clone(), c: c.clone(), d: d.clone() }
            }
            Node::Redheffer { phi, f } => Wire::Redheffer {
                phi11: phi.phi11.clone(),
                phi12: phi.phi12.clone(),
                phi21: phi.phi21.clone(),
                phi22: phi.phi22.clone(),
                f: f.clone(),
            },
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SchurFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let built = match Wire::deserialize(deserializer)? {
            Wire::Const { value } => SchurFunction::constant(value),
            Wire::Poly { coeffs } => SchurFunction::poly(coeffs),
            Wire::Blaschke { omega, alpha } => {
                SchurFunction::blaschke(Complex64::new(omega[0], omega[1]), alpha)
            }
            Wire::Diag { entries } => SchurFunction::diag(entries),
            Wire::Block2x2 { blocks } => SchurFunction::block2x2(blocks),
            Wire::Realization { a, b, c, d } => SchurFunction::realization(a, b, c, d),
            Wire::Redheffer { phi11, phi12, phi21, phi22, f } => {
                SchurFunction::redheffer(RedhefferBlocks { phi11, phi12, phi21, phi22 }, f)
            }
        };
        built.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn blaschke_values() {
        let b = SchurFunction::blaschke(c(0.5), 0.0).unwrap();
        assert!(b.eval(c(0.5)).unwrap().norm2() < 1e-15);
        assert!((b.eval(c(0.0)).unwrap().get(0, 0) - c(0.5)).norm() < 1e-15);
        for k in 0..256 {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 256.0);
            assert!((b.eval(z).unwrap().get(0, 0).norm() - 1.0).abs() < 1e-10);
        }
        assert!(SchurFunction::blaschke(c(1.0), 0.0).is_err());
    }

    #[test]
    fn monomial() {
        let g = SchurFunction::scaled_variable(c(1.0)).unwrap();
        assert!((g.eval(c(0.9)).unwrap().get(0, 0) - c(0.9)).norm() < 1e-15);
    }

    #[test]
    fn refuses_non_contractive() {
        assert!(matches!(
            SchurFunction::scaled_variable(c(1.5)),
            Err(SchurError::NotContractive { .. })
        ));
        let p = SchurFunction::poly(vec![ComplexMatrix::real_scalar(0.5), ComplexMatrix::real_scalar(0.6)]);
        assert!(p.is_err());
    }

    #[test]
    fn realization_matches_closed_form() {
        let a = ComplexMatrix::real_scalar(0.5);
        let b = ComplexMatrix::real_scalar(0.5);
        let cc = ComplexMatrix::real_scalar(0.5);
        let d = ComplexMatrix::real_scalar(0.0);
        let f = SchurFunction::realization(a, b, cc, d).unwrap();
        let z = c(0.3);
        let expected = 0.25 * 0.3 / (1.0 - 0.15);
        assert!((f.eval(z).unwrap().get(0, 0).re - expected).abs() < 1e-15);
        assert!(f.extends_to_boundary());
    }

    #[test]
    fn realization_with_unit_spectrum_stays_inside() {
        let f = SchurFunction::realization(
            ComplexMatrix::real_scalar(1.0),
            ComplexMatrix::real_scalar(0.0),
            ComplexMatrix::real_scalar(0.0),
            ComplexMatrix::real_scalar(0.5),
        )
        .unwrap();
        assert!(!f.extends_to_boundary());
        assert!(matches!(f.eval(c(1.0)), Err(SchurError::Domain { .. })));
        assert!(f.eval(c(0.99)).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let b = SchurFunction::blaschke(Complex64::new(0.3, -0.1), 0.25).unwrap();
        let d = SchurFunction::diag(vec![b, SchurFunction::scalar(c(0.5)).unwrap()]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        let back: SchurFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.shape(), (2, 2));
        let g: SchurFunction = serde_json::from_str(
            r#"{"kind":"poly","coeffs":[{"rows":1,"cols":1,"data":[[0,0]]},{"rows":1,"cols":1,"data":[[1,0]]}]}"#,
        )
        .unwrap();
        assert!((g.eval(c(0.9)).unwrap().get(0, 0).re - 0.9).abs() < 1e-15);
        let bad: Result<SchurFunction, _> =
            serde_json::from_str(r#"{"kind":"blaschke","omega":[1.2,0],"alpha":0}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn block_shapes() {
        let z = |r: usize, cc: usize| SchurFunction::constant(ComplexMatrix::zeros(r, cc)).unwrap();
        let f = SchurFunction::block2x2([[z(1, 2), z(1, 3)], [z(2, 2), z(2, 3)]]).unwrap();
        assert_eq!(f.shape(), (3, 5));
        assert!(SchurFunction::block2x2([[z(1, 2), z(2, 3)], [z(2, 2), z(2, 3)]]).is_err());
    }
}
