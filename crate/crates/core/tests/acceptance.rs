//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;

use common::{c, random_poly, t};
use schur_order::numeric::{complex_sandwich_witness, defect_pair, sandwich_solve, Complex64, ComplexMatrix};
use schur_order::preorder::{check_preceq, radius_from_y, segment_check, Contraction};
use schur_order::random::{random_contraction, random_isometry, random_matrix, random_with_norm, rng};
use schur_order::redheffer::{
    apply, boundary_tilde_witnesses, defect_inequality_check, diagonal_inner_family, difference_residual,
    pullback_equiv, transport_equiv, RedhefferCoefficients,
};
use schur_order::schur::{
    classify_equiv_infty, continuity_probe, pointwise_witness_profile, BoundaryDiscontinuousFactor as Ex,
    ContinuityPolicy, CurveSpec, ProfileClass, SamplingGrid, SchurFunction, TailVerdict, Verdict,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn contraction(m: ComplexMatrix) -> Contraction {
    Contraction::new(m, &t()).unwrap()
}

fn defect_sum_identity() -> Outcome {
    let mut g = rng(101);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = g.gen_range(1..=6);
        let (a, b) = (random_contraction(&mut g, n, n, 1.0), random_contraction(&mut g, n, n, 1.0));
        let (da, db) = (defect_pair(&a, &t()).unwrap(), defect_pair(&b, &t()).unwrap());
        let lhs = (ComplexMatrix::identity(n) - a.adjoint() * &b).real_part().scale_real(2.0);
        let diff = &a - &b;
        let rhs = &da.d * &da.d + &db.d * &db.d + diff.adjoint() * &diff;
        worst = worst.max((lhs - rhs).norm2());
    }
    ensure(worst <= 1e-10, || format!("residual {worst:.3e}"))?;
    Ok(format!("max residual {worst:.2e}"))
}

fn witness_pipeline() -> Outcome {
    let mut g = rng(202);
    let (mut worst_res, mut worst_eig) = (0.0f64, f64::INFINITY);
    for i in 0..200 {
        let n = g.gen_range(1..=6);
        let b = contraction(random_contraction(&mut g, n, n, 0.9));
        let a = contraction(random_contraction(&mut g, n, n, 1.0));
        let w = check_preceq(&a, &b, &t()).map_err(|e| format!("pair {i}: {e}"))?;
        worst_res = worst_res.max(w.residuals.x).max(w.residuals.y);
        worst_eig = worst_eig.min(w.residuals.min_eig_2re_y_minus_i);
        if let Some(bad) = w.bounds.iter().find(|b| !b.pass) {
            return Err(format!("pair {i}: bound {} fails ({} vs {})", bad.name, bad.achieved, bad.claimed));
        }
        let r = radius_from_y(&w.y, &t()).map_err(|e| e.to_string())?;
        ensure(segment_check(&a, &b, r, 64, &t()).pass, || format!("pair {i}: segment at r = {r}"))?;
    }
    ensure(worst_res <= 1e-8, || format!("residual {worst_res:.3e}"))?;
    ensure(worst_eig >= -1e-8, || format!("min eig {worst_eig:.3e}"))?;
    Ok(format!("max residual {worst_res:.2e}, min eig(2Re Y - I) {worst_eig:.3e}"))
}

fn strict_and_isometric_classes() -> Outcome {
    let mut g = rng(303);
    for _ in 0..50 {
        let b = contraction(random_contraction(&mut g, 3, 3, 0.9));
        let a = contraction(random_contraction(&mut g, 3, 3, 1.0));
        ensure(check_preceq(&a, &b, &t()).is_ok(), || "strict B failed to dominate".into())?;
    }
    let iso = contraction(random_isometry(&mut g, 3, 2));
    ensure(check_preceq(&iso, &iso, &t()).is_ok(), || "isometry does not dominate itself".into())?;
    let mut min_dist = f64::INFINITY;
    for _ in 0..50 {
        let e = random_matrix(&mut g, 3, 2, 1.0);
        let cand = &iso.matrix + e.scale_real((1e-3 + 0.5 * g.gen::<f64>()) / e.norm2());
        let cand = contraction(cand.scale_real(1.0 / cand.norm2().max(1.0)));
        let dist = (&cand.matrix - &iso.matrix).norm2();
        min_dist = min_dist.min(dist);
        ensure(dist >= 1e-3 && check_preceq(&cand, &iso, &t()).is_err(), || {
            format!("perturbation of size {dist:.3e} accepted")
        })?;
    }
    Ok(format!("50 dominated, 50 refused (min perturbation {min_dist:.2e})"))
}

fn linear_counterexample() -> Outcome {
    let zero = SchurFunction::scalar(c(0.0)).unwrap();
    let lin = SchurFunction::scaled_variable(c(1.0)).unwrap();
    let at = |z: f64| contraction(ComplexMatrix::real_scalar(z));
    let w = check_preceq(&at(0.0), &at(0.9), &t()).map_err(|e| e.to_string())?;
    let x = w.x.get(0, 0);
    let expected = -0.9 / 0.19;
    ensure((x - c(expected)).norm() <= 1e-10, || format!("X(0.9) = {x}, expected {expected}"))?;
    let prof = pointwise_witness_profile(&zero, &lin, &SamplingGrid::default(), &t()).map_err(|e| e.to_string())?;
    ensure(prof.classification == ProfileClass::EvidenceDiverging, || format!("{:?}", prof.classification))?;
    let min_ratio = prof.growth_ratios.iter().filter_map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    ensure(min_ratio >= 1.5, || format!("growth ratio {min_ratio}"))?;
    Ok(format!("X(0.9) = {:.6}, min growth ratio {min_ratio:.4}", x.re))
}

fn blaschke_pair() -> Outcome {
    let grid = SamplingGrid::default();
    let b1 = SchurFunction::blaschke(c(0.3), 0.0).unwrap();
    let b2 = SchurFunction::blaschke(c(0.5), 0.0).unwrap();
    let rep = classify_equiv_infty(&b1, &b2, &grid, &t()).map_err(|e| e.to_string())?;
    let refusals = rep.forward.profile.refusals + rep.backward.profile.refusals;
    ensure(refusals == 0, || format!("{refusals} pointwise refusals"))?;
    ensure(rep.verdict == Verdict::RefutedDiverging, || format!("distinct factors: {:?}", rep.verdict))?;
    let same = classify_equiv_infty(&b1, &b1, &grid, &t()).map_err(|e| e.to_string())?;
    ensure(same.verdict == Verdict::Supported, || format!("identical factors: {:?}", same.verdict))?;
    Ok(format!("pointwise comparable at {} points, sup Q {:.4e}", rep.forward.profile.points.len(), rep.forward.profile.sup_q))
}

fn boundary_discontinuity() -> Outcome {
    let to_i = continuity_probe(Ex::u, Ex::v, &CurveSpec::radial(Complex64::i(), 48), &t(), &ContinuityPolicy::default())
        .map_err(|e| e.to_string())?;
    ensure(to_i.verdict == TailVerdict::Convergent && to_i.tail_delta <= 1e-6, || {
        format!("toward i: {:?}, tail delta {:.3e}", to_i.verdict, to_i.tail_delta)
    })?;
    let pol = ContinuityPolicy { tail: 12, ..ContinuityPolicy::default() };
    let to_one = continuity_probe(Ex::u, Ex::v, &Ex::real_axis_curve(3, 8), &t(), &pol).map_err(|e| e.to_string())?;
    ensure(to_one.verdict == TailVerdict::Oscillating && to_one.oscillation >= 0.5, || {
        format!("toward 1: {:?}, amplitude {:.4}", to_one.verdict, to_one.oscillation)
    })?;
    Ok(format!("tail delta toward i {:.2e}, amplitude toward 1 {:.4}", to_i.tail_delta, to_one.oscillation))
}

fn redheffer_identities() -> Outcome {
    let mut g = rng(404);
    let grid = SamplingGrid::geometric(8, 32, 256).unwrap();
    let (mut diff_max, mut gap_min, mut eq_max) = (0.0f64, f64::INFINITY, 0.0f64);
    let mut check = |phi: &RedhefferCoefficients, k1: &SchurFunction, k2: &SchurFunction, inner: bool| {
        let d = difference_residual(phi, k1, k2, &grid, &t()).map_err(|e| e.to_string())?;
        let q = defect_inequality_check(phi, k1, &grid, &t()).map_err(|e| e.to_string())?;
        diff_max = diff_max.max(d.max_residual);
        gap_min = gap_min.min(q.min_gap_first).min(q.min_gap_second);
        if inner {
            let (Some(a), Some(b)) = (q.boundary_equality_first, q.boundary_equality_second) else {
                return Err("inner Φ without boundary equality samples".to_string());
            };
            eq_max = eq_max.max(a).max(b);
        }
        Ok(())
    };
    for _ in 0..50 {
        let (e, u, y) = (g.gen_range(1..=3), g.gen_range(1..=3), g.gen_range(1..=3));
        let phi = RedhefferCoefficients::constant(&random_with_norm(&mut g, e + y, e + u, 1.0), e, e).unwrap();
        let k1 = SchurFunction::constant(random_contraction(&mut g, e, e, 0.95)).unwrap();
        let k2 = random_poly(&mut g, e, 2, 0.95);
        check(&phi, &k1, &k2, false)?;
    }
    for j in 1..=8 {
        let deltas: Vec<f64> = (1..=j).map(|i| 1.0 - 2f64.powi(-i)).collect();
        let fam = diagonal_inner_family(&deltas).unwrap();
        let k2 = random_poly(&mut g, j as usize, 2, 0.9);
        check(&fam.coefficients, &fam.f2, &k2, true)?;
    }
    ensure(diff_max <= 1e-10, || format!("difference residual {diff_max:.3e}"))?;
    ensure(gap_min >= -1e-9, || format!("min eigenvalue {gap_min:.3e}"))?;
    ensure(eq_max <= 1e-6, || format!("boundary equality {eq_max:.3e}"))?;
    Ok(format!("difference {diff_max:.2e}, min gap {gap_min:.3e}, boundary equality {eq_max:.2e}"))
}

fn equivalence_transport() -> Outcome {
    let mut g = rng(505);
    let grid = SamplingGrid::geometric(8, 32, 64).unwrap();
    let (mut res, mut excess) = (0.0f64, f64::NEG_INFINITY);
    for i in 0..20 {
        let k = 1 + i % 2;
        let phi = if i % 2 == 0 {
            let deltas: Vec<f64> = (0..k).map(|_| g.gen_range(0.1..0.95)).collect();
            diagonal_inner_family(&deltas).unwrap().coefficients
        } else {
            let (u, y) = (g.gen_range(1..=2), g.gen_range(1..=2));
            RedhefferCoefficients::constant(&random_with_norm(&mut g, k + y, k + u, 1.0), k, k).unwrap()
        };
        let mut strict = |poly: bool| {
            if poly {
                random_poly(&mut g, k, 2, 0.9)
            } else {
                SchurFunction::constant(random_contraction(&mut g, k, k, 0.9)).unwrap()
            }
        };
        let (f1, f2) = (strict(i % 4 < 2), strict(i % 3 == 0));
        let cert = transport_equiv(&phi, &f1, &f2, &grid, &t()).map_err(|e| format!("pair {i}: {e}"))?;
        res = res.max(cert.max_residual);
        excess = excess.max(cert.sup_transported - cert.input_sup);
        ensure(cert.domain_norms.0 < 1.0 && cert.domain_norms.1 < 1.0, || format!("pair {i}: domain"))?;
    }
    ensure(res <= 1e-8, || format!("residual {res:.3e}"))?;
    ensure(excess <= 1e-8, || format!("sup excess {excess:.3e}"))?;
    Ok(format!("max residual {res:.2e}, max sup_transported - sup_input {excess:.3e}"))
}

fn inner_family_growth() -> Outcome {
    let deltas: Vec<f64> = (1..=8).map(|j| 1.0 - 2f64.powi(-j)).collect();
    let fam = diagonal_inner_family(&deltas).unwrap();
    let r1 = apply(&fam.coefficients, &fam.f1).map_err(|e| e.to_string())?;
    let r2 = apply(&fam.coefficients, &fam.f2).map_err(|e| e.to_string())?;
    let prof = pointwise_witness_profile(&r1, &r2, &SamplingGrid::default(), &t()).map_err(|e| e.to_string())?;
    ensure(prof.refusals == 0, || format!("{} refusals", prof.refusals))?;
    let mismatch = prof.points.iter().map(|p| (&p.q - fam.expected_q(p.lambda)).norm2()).fold(0.0, f64::max);
    ensure(mismatch <= 1e-8, || format!("witness mismatch {mismatch:.3e}"))?;
    // δ = 255/256 gives δ/(1 - δ²) = 255·256/511
    let bound = fam.sup_lower_bound();
    ensure((bound - 255.0 * 256.0 / 511.0).abs() <= 1e-10, || format!("bound {bound}"))?;
    ensure(prof.sup_q >= bound, || format!("sup {} vs bound {bound}", prof.sup_q))?;
    Ok(format!("mismatch {mismatch:.2e}, sup {:.4} >= {bound:.4}", prof.sup_q))
}

fn boundary_pullback() -> Outcome {
    let mut g = rng(606);
    let fam = diagonal_inner_family(&[0.5, 0.8]).unwrap();
    let grid = SamplingGrid::geometric(6, 16, 256).unwrap();
    let mut worst = 0.0f64;
    for i in 0..4 {
        let f = random_poly(&mut g, 2, 2, 0.9);
        let gg = SchurFunction::constant(random_contraction(&mut g, 2, 2, 0.9)).unwrap();
        let qt = boundary_tilde_witnesses(&fam.coefficients, &f, &gg, &grid, &t()).map_err(|e| e.to_string())?;
        let rep = pullback_equiv(&fam.coefficients, &f, &gg, &qt, &grid, &t()).map_err(|e| e.to_string())?;
        ensure(rep.points.len() == 256, || format!("pair {i}: {} samples", rep.points.len()))?;
        worst = worst.max(rep.max_discrepancy);
    }
    ensure(worst <= 1e-6, || format!("discrepancy {worst:.3e}"))?;
    Ok(format!("max discrepancy {worst:.2e} over 4 pairs x 256 samples"))
}

fn cross_route() -> Outcome {
    let mut g = rng(707);
    let (mut accepted, mut worst) = (0, 0.0f64);
    for i in 0..100 {
        let n = g.gen_range(1..=4);
        let k = g.gen_range(1..=4);
        let d = random_matrix(&mut g, k, n, 1.0);
        let cm = if i % 2 == 0 {
            d.adjoint() * random_matrix(&mut g, k, k, 1.0) * &d
        } else {
            random_matrix(&mut g, n, n, 1.0)
        };
        let direct = sandwich_solve(&cm, &d.adjoint(), &d, &t());
        let split = complex_sandwich_witness(&cm, &d, &t());
        ensure(direct.is_ok() == split.is_ok(), || format!("instance {i}: routes disagree"))?;
        if let (Ok(z1), Ok(z2)) = (direct, split) {
            accepted += 1;
            worst = worst.max((d.adjoint() * &z1 * &d - &cm).norm2()).max((d.adjoint() * &z2 * &d - &cm).norm2());
        }
    }
    ensure(worst <= 1e-8, || format!("residual {worst:.3e}"))?;
    Ok(format!("{accepted} accepted, {} refused by both, max residual {worst:.2e}", 100 - accepted))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 11] = [
        ("defect sum identity", 1, defect_sum_identity),
        ("witness pipeline", 5, witness_pipeline),
        ("strict and isometric classes", 2, strict_and_isometric_classes),
        ("zero below the variable", 1, linear_counterexample),
        ("distinct Blaschke factors", 2, blaschke_pair),
        ("boundary-discontinuous factor", 1, boundary_discontinuity),
        ("linear-fractional identities", 10, redheffer_identities),
        ("equivalence transport", 10, equivalence_transport),
        ("inner family witness growth", 5, inner_family_growth),
        ("boundary pull-back", 5, boundary_pullback),
        ("sandwich cross-route", 2, cross_route),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(budget);
        let (tag, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {name:<32} {:>8.1} ms  {detail}", elapsed.as_secs_f64() * 1e3);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
