use proptest::prelude::*;
use rand::Rng;

use schur_order::numeric::{douglas_factor, Complex64, ComplexMatrix, Tolerances};
use schur_order::preorder::{check_preceq, radius_from_y, segment_check, Contraction, DEFAULT_SEGMENT_SAMPLES};
use schur_order::random::{random_contraction, random_isometry, random_matrix, rng};

fn t() -> Tolerances {
    Tolerances::default()
}

fn contraction(m: ComplexMatrix) -> Contraction {
    Contraction::new(m, &t()).unwrap()
}

/// `U diag(1, .., 1, s_k, ..) V*` with `ones` unit singular values.
fn with_unit_singular_values<R: Rng>(g: &mut R, n: usize, ones: usize) -> ComplexMatrix {
    let s: Vec<f64> = (0..n).map(|i| if i < ones { 1.0 } else { 0.9 * g.gen::<f64>() }).collect();
    let u = random_isometry(g, n, n);
    let v = random_isometry(g, n, n);
    u * ComplexMatrix::from_real_diagonal(&s) * v.adjoint()
}

/// `B + t D_{B*} X D_B`, halving `t` until the result is contractive.
fn dominated_by<R: Rng>(g: &mut R, b: &Contraction) -> Contraction {
    let x = random_matrix(g, b.rows(), b.cols(), 1.0);
    let step = b.d_star() * &x * b.d();
    let mut scale = 1.0;
    for _ in 0..40 {
        let a = &b.matrix + step.scale_real(scale);
        if a.norm2() <= 1.0 {
            return contraction(a);
        }
        scale *= 0.5;
    }
    b.clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn defect_sum_identity(seed in any::<u64>(), n in 1usize..=6) {
        let mut g = rng(seed);
        let (a, b) = (random_contraction(&mut g, n, n, 1.0), random_contraction(&mut g, n, n, 1.0));
        let (ca, cb) = (contraction(a.clone()), contraction(b.clone()));
        let id = ComplexMatrix::identity(n);
        let lhs = (&id - a.adjoint() * &b).real_part().scale_real(2.0);
        let diff = &a - &b;
        let rhs = ca.d() * ca.d() + cb.d() * cb.d() + diff.adjoint() * &diff;
        prop_assert!((lhs - rhs).norm2() <= 1e-10);
    }

    #[test]
    fn accepted_witnesses_are_consistent(seed in any::<u64>(), n in 1usize..=5, ones in 0usize..=3) {
        let mut g = rng(seed);
        let b = contraction(with_unit_singular_values(&mut g, n, ones.min(n)));
        let a = dominated_by(&mut g, &b);
        let w = check_preceq(&a, &b, &t()).unwrap();
        prop_assert!(w.residuals.min_eig_2re_y_minus_i >= -1e-8);
        let r = radius_from_y(&w.y, &t()).unwrap();
        prop_assert!(segment_check(&a, &b, r, DEFAULT_SEGMENT_SAMPLES, &t()).pass);

        // D_A = N D_B with N*N <= 2Re Y - I on the defect space of B
        let nmap = douglas_factor(a.d(), b.d(), &t()).unwrap();
        prop_assert!((&nmap * b.d() - a.d()).norm2() <= 1e-8);
        if w.y.rows() > 0 {
            let h = w.y.real_part().scale_real(2.0) - ComplexMatrix::identity(w.y.rows());
            prop_assert!((nmap.adjoint() * &nmap).norm2() <= h.norm2() + 1e-8);
        }
        let e = &b.defects.basis;
        let off = ComplexMatrix::identity(n) - e * e.adjoint();
        prop_assert!(((&a.matrix - &b.matrix) * off).norm2() <= 1e-8);

        prop_assert!(check_preceq(&a.adjoint(&t()).unwrap(), &b.adjoint(&t()).unwrap(), &t()).is_ok());
        let c = random_contraction(&mut g, n, n, 1.0);
        let d = random_contraction(&mut g, n, n, 1.0);
        let dac = contraction(&d * &a.matrix * &c);
        let dbc = contraction(&d * &b.matrix * &c);
        prop_assert!(check_preceq(&dac, &dbc, &t()).is_ok());
    }

    #[test]
    fn transitive_on_diagonal_chains(seed in any::<u64>(), n in 1usize..=4) {
        let mut g = rng(seed);
        let unit = Complex64::from_polar(1.0, g.gen_range(0.0..6.28));
        let diag = |g: &mut rand_chacha::ChaCha8Rng| {
            let mut d = vec![unit];
            d.extend((1..n).map(|_| Complex64::from_polar(0.95 * g.gen::<f64>(), g.gen_range(0.0..6.28))));
            contraction(ComplexMatrix::from_diagonal(&d))
        };
        let (a, b, c) = (diag(&mut g), diag(&mut g), diag(&mut g));
        prop_assert!(check_preceq(&a, &b, &t()).is_ok() && check_preceq(&b, &c, &t()).is_ok());
        prop_assert!(check_preceq(&a, &c, &t()).is_ok());
    }
}

#[test]
fn refusals_agree_with_segments() {
    let cases: [(&[f64], &[f64]); 3] = [
        (&[0.9], &[1.0]),
        (&[-0.2], &[-1.0]),
        (&[0.9, 0.2], &[1.0, 0.5]),
    ];
    for (a, b) in cases {
        let (a, b) = (contraction(ComplexMatrix::from_real_diagonal(a)), contraction(ComplexMatrix::from_real_diagonal(b)));
        assert!(check_preceq(&a, &b, &t()).unwrap_err().is_refusal());
        for r in [0.05, 0.2, 1.0] {
            assert!(!segment_check(&a, &b, r, DEFAULT_SEGMENT_SAMPLES, &t()).pass, "r = {r}");
        }
    }
}

#[test]
fn strict_dominates_and_isometries_are_isolated() {
    let mut g = rng(17);
    for _ in 0..50 {
        let b = contraction(random_contraction(&mut g, 3, 3, 0.9));
        let a = contraction(random_contraction(&mut g, 3, 3, 1.0));
        assert!(check_preceq(&a, &b, &t()).is_ok());
    }
    let iso = contraction(random_isometry(&mut g, 3, 2));
    assert!(check_preceq(&iso, &iso, &t()).is_ok());
    for _ in 0..50 {
        let e = random_matrix(&mut g, 3, 2, 1.0);
        let size = 1e-3 + 0.5 * g.gen::<f64>();
        let cand = &iso.matrix + e.scale_real(size / e.norm2());
        let cand = contraction(cand.scale_real(1.0 / cand.norm2().max(1.0)));
        assert!((&cand.matrix - &iso.matrix).norm2() >= 1e-4);
        assert!(check_preceq(&cand, &iso, &t()).unwrap_err().is_refusal());
    }
}
