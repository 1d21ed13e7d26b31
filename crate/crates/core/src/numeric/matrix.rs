//! Dense complex matrix newtype and its JSON wire format.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::NumericError;

/// `M = U diag(s) V*` restricted to the singular values with reliable vectors.
#[derive(Debug, Clone)]
pub(crate) struct Svd {
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
    pub s: Vec<f64>,
    /// All `min(rows, cols)` singular values, descending.
    pub values: Vec<f64>,
}

/// Dense complex matrix. Entries are finite at construction time.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, NumericError> {
        if data.len() != rows * cols {
            return Err(NumericError::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NumericError::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &data)))
    }

    /// Builds a matrix from rows of real numbers. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self(DMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// 1x1 matrix.
    pub fn scalar(z: Complex64) -> Self {
        Self(DMatrix::from_element(1, 1, z))
    }

    pub fn real_scalar(x: f64) -> Self {
        Self::scalar(Complex64::new(x, 0.0))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { Complex64::new(0.0, 0.0) })
    }

    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.0[(i, j)] = z;
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    /// `(M + M*)/2`.
    pub fn real_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// `(M - M*)/(2i)`.
    pub fn imag_part(&self) -> Self {
        Self((&self.0 - self.0.adjoint()) * Complex64::new(0.0, -0.5))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest singular value. Zero for empty matrices.
    pub fn norm2(&self) -> f64 {
        if self.rows() == 0 || self.cols() == 0 {
            return 0.0;
        }
        self.singular_values().into_iter().fold(0.0, f64::max)
    }

    /// All `min(rows, cols)` singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        self.svd().values
    }

    /// Thin SVD read off the Hermitian eigen-decomposition of `[[0, M], [M*, 0]]`, whose
    /// eigenvalues are `±σ_i` with eigenvectors `[u_i; ±v_i]/√2`. nalgebra's bidiagonal SVD
    /// loses accuracy on inputs with repeated or zero singular values; its Hermitian
    /// eigen-solver does not.
    pub(crate) fn svd(&self) -> Svd {
        let (m, n) = self.shape();
        let k = m.min(n);
        if k == 0 {
            return Svd { u: Self::zeros(m, 0), v: Self::zeros(n, 0), s: Vec::new(), values: Vec::new() };
        }
        let mut h = DMatrix::zeros(m + n, m + n);
        h.view_mut((0, m), (m, n)).copy_from(&self.0);
        h.view_mut((m, 0), (n, m)).copy_from(&self.0.adjoint());
        let (eig, vectors) = Self(h).eigh();
        let top: Vec<usize> = (0..k).map(|i| m + n - 1 - i).collect();
        let values: Vec<f64> = top.iter().map(|&j| eig[j].max(0.0)).collect();
        // Pairs this close to zero are mixed with the kernel and carry no usable vectors.
        let floor = 64.0 * f64::EPSILON * (m + n) as f64 * values[0];
        let (mut us, mut vs, mut s) = (Vec::new(), Vec::new(), Vec::new());
        for (&j, &sigma) in top.iter().zip(&values) {
            if sigma <= floor {
                break;
            }
            let x = vectors.0.view((0, j), (m, 1)).into_owned();
            let y = vectors.0.view((m, j), (n, 1)).into_owned();
            us.push(&x / Complex64::new(x.norm(), 0.0));
            vs.push(&y / Complex64::new(y.norm(), 0.0));
            s.push(sigma);
        }
        let stack = |cols: &[DMatrix<Complex64>], rows: usize| {
            Self(DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][(i, 0)]))
        };
        Svd { u: stack(&us, m), v: stack(&vs, n), s, values }
    }

    /// Smallest over largest singular value of a square matrix; `f64::INFINITY` when singular.
    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
        if sv.len() < self.rows().max(self.cols()) || min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    /// Operator-norm distance from Hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (self - &self.adjoint()).norm2()
    }

    /// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
    pub(crate) fn eigh(&self) -> (Vec<f64>, ComplexMatrix) {
        let n = self.rows();
        if n == 0 {
            return (Vec::new(), ComplexMatrix::zeros(0, 0));
        }
        let sym = self.real_part().0;
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        // Fix the phase of each eigenvector: largest-modulus component real and positive.
        for mut col in vectors.column_iter_mut() {
            let pivot = col.iter().copied().fold(Complex64::new(0.0, 0.0), |best, z| {
                if z.norm() > best.norm() * (1.0 + 1e-12) {
                    z
                } else {
                    best
                }
            });
            if pivot.norm() > 0.0 {
                col *= pivot.conj() / pivot.norm();
            }
        }
        (values, ComplexMatrix(vectors))
    }

    /// Smallest eigenvalue of the Hermitian part (`+inf` for empty matrices).
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().0.first().copied().unwrap_or(f64::INFINITY)
    }

    pub(crate) fn scale_columns(&self, factors: &[f64]) -> ComplexMatrix {
        let mut m = self.0.clone();
        for (j, &f) in factors.iter().enumerate() {
            m.column_mut(j).scale_mut(f);
        }
        ComplexMatrix(m)
    }

    /// Selects a subset of columns.
    pub fn select_columns(&self, cols: &[usize]) -> ComplexMatrix {
        ComplexMatrix(DMatrix::from_fn(self.rows(), cols.len(), |i, j| self.0[(i, cols[j])]))
    }

    pub fn column(&self, j: usize) -> ComplexMatrix {
        self.select_columns(&[j])
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nrows: usize, ncols: usize) -> ComplexMatrix {
        ComplexMatrix(self.0.view((r0, c0), (nrows, ncols)).into_owned())
    }

    /// `[[a, b], [c, d]]` block matrix.
    pub fn block2x2(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self, NumericError> {
        if a.rows() != b.rows() || c.rows() != d.rows() || a.cols() != c.cols() || b.cols() != d.cols()
        {
            return Err(NumericError::Shape(format!(
                "incompatible blocks {:?} {:?} / {:?} {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        let (r1, c1) = a.shape();
        let (nr, nc) = (r1 + c.rows(), c1 + b.cols());
        Ok(Self::from_fn(nr, nc, |i, j| match (i < r1, j < c1) {
            (true, true) => a.get(i, j),
            (true, false) => b.get(i, j - c1),
            (false, true) => c.get(i - r1, j),
            (false, false) => d.get(i - r1, j - c1),
        }))
    }

    pub fn vstack(top: &Self, bottom: &Self) -> Result<Self, NumericError> {
        if top.cols() != bottom.cols() {
            return Err(NumericError::Shape("vstack column mismatch".into()));
        }
        let r1 = top.rows();
        Ok(Self::from_fn(r1 + bottom.rows(), top.cols(), |i, j| {
            if i < r1 {
                top.get(i, j)
            } else {
                bottom.get(i - r1, j)
            }
        }))
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(Self::rows).sum();
        let cols = blocks.iter().map(Self::cols).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.view_mut((r0, c0), b.shape()).copy_from(&b.0);
            r0 += b.rows();
            c0 += b.cols();
        }
        Self(out)
    }

    /// Solves `self * x = rhs` for square `self` by LU; `None` when singular.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        if !self.is_square() || self.rows() != rhs.rows() {
            return None;
        }
        if self.rows() == 0 {
            return Some(rhs.clone());
        }
        self.0.clone().lu().solve(&rhs.0).map(Self)
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Self::identity(self.rows()))
    }

    /// Maximum modulus of the eigenvalues of a square matrix.
    pub fn spectral_radius(&self) -> f64 {
        if self.rows() == 0 {
            return 0.0;
        }
        let schur = self.0.clone().schur();
        let (_, t) = schur.unpack();
        (0..t.nrows()).map(|i| t[(i, i)].norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}[", self.shape())?;
        for i in 0..self.rows() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols() {
                let z = self.get(i, j);
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0.$method(rhs.0))
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0.$method(&rhs.0))
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixWire {
            rows: self.rows(),
            cols: self.cols(),
            data: self.to_row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let data = wire.data.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::new(wire.rows, wire.cols, data).map_err(D::Error::custom)
    }
}
