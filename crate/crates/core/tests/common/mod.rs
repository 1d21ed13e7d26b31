#![allow(dead_code)]

use rand::Rng;

use schur_order::numeric::{Complex64, Tolerances};
use schur_order::random::{random_contraction, random_disc_point, random_matrix};
use schur_order::schur::SchurFunction;

pub fn t() -> Tolerances {
    Tolerances::default()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Polynomial with `sum ‖C_k‖ <= max_norm`.
pub fn random_poly<R: Rng>(g: &mut R, n: usize, degree: usize, max_norm: f64) -> SchurFunction {
    let weights: Vec<f64> = (0..=degree).map(|_| g.gen::<f64>() + 0.05).collect();
    let total: f64 = weights.iter().sum();
    let coeffs = weights
        .iter()
        .map(|w| {
            let m = random_matrix(g, n, n, 1.0);
            let s = max_norm * w / total / m.norm2().max(1e-300);
            m.scale_real(s)
        })
        .collect();
    SchurFunction::poly(coeffs).unwrap()
}

/// Transfer function of a random contractive colligation with `k` states.
pub fn random_realization<R: Rng>(g: &mut R, n: usize, k: usize, max_norm: f64) -> SchurFunction {
    let col = random_contraction(g, k + n, k + n, max_norm);
    SchurFunction::realization(
        col.submatrix(0, 0, k, k),
        col.submatrix(0, k, k, n),
        col.submatrix(k, 0, n, k),
        col.submatrix(k, k, n, n),
    )
    .unwrap()
}

pub fn random_blaschke_diag<R: Rng>(g: &mut R, n: usize) -> SchurFunction {
    SchurFunction::diag(
        (0..n)
            .map(|_| SchurFunction::blaschke(random_disc_point(g, 0.9), g.gen_range(0.0..6.28)).unwrap())
            .collect(),
    )
    .unwrap()
}

/// One of the tree kinds, `n x n`, with sup norm at most `max_norm` (Blaschke entries are inner).
pub fn random_schur<R: Rng>(g: &mut R, n: usize, kind: usize, max_norm: f64) -> SchurFunction {
    match kind % 5 {
        0 => SchurFunction::constant(random_contraction(g, n, n, max_norm)).unwrap(),
        1 => random_poly(g, n, 3, max_norm),
        2 => random_realization(g, n, 2, max_norm),
        3 => random_blaschke_diag(g, n),
        _ => {
            let mut entries = vec![SchurFunction::blaschke(random_disc_point(g, 0.9), 0.0).unwrap()];
            entries.extend((1..n).map(|_| random_poly(g, 1, 2, max_norm)));
            SchurFunction::diag(entries).unwrap()
        }
    }
}
