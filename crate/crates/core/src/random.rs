//! Seeded generators for test matrices. Every function takes the RNG explicitly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numeric::{ComplexMatrix, Complex64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with real and imaginary parts uniform in `[-scale, scale]`.
pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n, 1.0).real_part()
}

/// Random matrix rescaled to operator norm exactly `norm` (zero stays zero).
pub fn random_with_norm<R: Rng>(rng: &mut R, rows: usize, cols: usize, norm: f64) -> ComplexMatrix {
    let m = random_matrix(rng, rows, cols, 1.0);
    let n = m.norm2();
    if n == 0.0 {
        m
    } else {
        m.scale_real(norm / n)
    }
}

/// Random contraction with norm uniform in `(0, max_norm]`.
pub fn random_contraction<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_norm: f64,
) -> ComplexMatrix {
    let target = max_norm * (1.0 - rng.gen::<f64>());
    random_with_norm(rng, rows, cols, target)
}

/// Matrix with orthonormal columns (`rows >= cols`).
pub fn random_isometry<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols, "an isometry needs rows >= cols");
    let qr = random_matrix(rng, rows, cols, 1.0).into_dmatrix().qr();
    ComplexMatrix::from_dmatrix(qr.q())
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let v = random_matrix(rng, n, 1, 1.0);
    let norm = v.frobenius_norm();
    v.scale_real(1.0 / norm)
}

/// Uniform point in the disc of the given radius.
pub fn random_disc_point<R: Rng>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}
