use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{CurvePoint, CurveSpec, SchurError};
use crate::numeric::{douglas_factor, range_basis, Complex64, ComplexMatrix, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityPolicy {
    /// Number of interior samples (closest to the endpoint) forming the tail.
    pub tail: usize,
    /// Convergent when both tail measures are at most this.
    pub converge_tol: f64,
    /// Oscillating when the tail oscillation exceeds this.
    pub oscillation_threshold: f64,
}

impl Default for ContinuityPolicy {
    fn default() -> Self {
        Self { tail: 4, converge_tol: 1e-6, oscillation_threshold: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailVerdict {
    Convergent,
    Oscillating,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuitySample {
    pub t: f64,
    pub lambda: Complex64,
    pub w_norm: f64,
    /// `‖(W_t - W_1) X‖` for `X` an orthonormal basis of `Ran V(λ_1)`.
    pub range_delta: f64,
    /// `‖W_t V(λ_t) - U(λ_t)‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub samples: Vec<ContinuitySample>,
    pub endpoint: ContinuitySample,
    pub range_rank: usize,
    /// Largest `range_delta` over the tail.
    pub tail_delta: f64,
    /// Largest `‖W_s - W_t‖` over pairs of tail samples.
    pub oscillation: f64,
    pub verdict: TailVerdict,
    pub policy: ContinuityPolicy,
}

/// Follows the minimal Douglas factor `W_t` with `U(λ_t) = W_t V(λ_t)` along a curve whose
/// last sample is the endpoint `t = 1`, and reports whether `W_t` settles near the endpoint.
pub fn continuity_probe(
    u_fn: impl Fn(Complex64) -> ComplexMatrix,
    v_fn: impl Fn(Complex64) -> ComplexMatrix,
    curve: &CurveSpec,
    tol: &Tolerances,
    policy: &ContinuityPolicy,
) -> Result<ContinuityReport, SchurError> {
    let pts = curve.samples()?;
    let last = *pts.last().expect("samples are non-empty");
    if last.t != 1.0 {
        return Err(SchurError::BadGrid("continuity probe needs the endpoint t = 1".into()));
    }
    let factor = |p: &CurvePoint| -> Result<(ComplexMatrix, f64), SchurError> {
        let (u, v) = (u_fn(p.lambda), v_fn(p.lambda));
        let gap = v.adjoint() * &v - u.adjoint() * &u;
        let min_eig = gap.min_eigenvalue();
        if min_eig < -tol.tol_residual * v.norm2().powi(2).max(1.0) {
            return Err(SchurError::Majorization { t: p.t, min_eig });
        }
        let w = douglas_factor(&u, &v, tol)?;
        let residual = (&w * &v - &u).norm2();
        Ok((w, residual))
    };

    let (w1, res1) = factor(&last)?;
    let v1 = v_fn(last.lambda);
    let vv = &v1 * v1.adjoint();
    let basis = range_basis(&vv, tol.tol_rank * vv.norm2().max(1.0));
    let delta = |w: &ComplexMatrix| (w - &w1) * &basis;

    let mut samples = Vec::with_capacity(pts.len() - 1);
    let mut factors = Vec::with_capacity(pts.len() - 1);
    for p in &pts[..pts.len() - 1] {
        let (w, residual) = factor(p)?;
        samples.push(ContinuitySample {
            t: p.t,
            lambda: p.lambda,
            w_norm: w.norm2(),
            range_delta: delta(&w).norm2(),
            residual,
        });
        factors.push(w);
    }
    let start = factors.len().saturating_sub(policy.tail);
    let tail_delta = samples[start..].iter().map(|s| s.range_delta).fold(0.0, f64::max);
    let mut oscillation = 0.0f64;
    for i in start..factors.len() {
        for j in i + 1..factors.len() {
            oscillation = oscillation.max((&factors[i] - &factors[j]).norm2());
        }
    }
    let verdict = if oscillation > policy.oscillation_threshold {
        TailVerdict::Oscillating
    } else if tail_delta <= policy.converge_tol && oscillation <= policy.converge_tol {
        TailVerdict::Convergent
    } else {
        TailVerdict::Undetermined
    };
    Ok(ContinuityReport {
        samples,
        endpoint: ContinuitySample { t: 1.0, lambda: last.lambda, w_norm: w1.norm2(), range_delta: 0.0, residual: res1 },
        range_rank: basis.cols(),
        tail_delta,
        oscillation,
        verdict,
        policy: *policy,
    })
}

/// Real 2x2 data `U = W V` on the closed disc where `V` is positive definite inside the
/// disc, `U*U <= V*V`, and the factor `W` is continuous except at `λ = 1`.
///
/// With `α = 1 - |λ|²` and `s = √(1 + 4α²)`, `V = [[1, √α], [√α, 2α]] = E diag(d₊, d₋) E*`
/// where `d± = (1 + 2α ± s)/2` and `E` holds the normalized eigenvectors. Then
/// `U = E diag(1, φ) diag(d₊, d₋) E*` and `W = E diag(1, φ) E*` with
/// `φ(λ) = sin²(1/(1 - Re λ))`, `φ(1) = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BoundaryDiscontinuousFactor;

impl BoundaryDiscontinuousFactor {
    pub fn alpha(lambda: Complex64) -> f64 {
        (1.0 - lambda.norm_sqr()).max(0.0)
    }

    pub fn phi(lambda: Complex64) -> f64 {
        if lambda == Complex64::new(1.0, 0.0) {
            0.0
        } else {
            (1.0 / (1.0 - lambda.re)).sin().powi(2)
        }
    }

    /// Orthonormal eigenvectors `(e₊, e₋)` as columns and eigenvalues `(d₊, d₋)` of `V(λ)`.
    pub fn eigen(lambda: Complex64) -> (ComplexMatrix, [f64; 2]) {
        let a = Self::alpha(lambda);
        let s = (1.0 + 4.0 * a * a).sqrt();
        let sa = a.sqrt();
        // e₊ ∝ (-2√α, 1 - 2α - s), divided by √α; e₋ ∝ (-2√α, 1 - 2α + s).
        let plus = [-1.0, -sa * (1.0 + 2.0 * a / (1.0 + s))];
        let minus = [-2.0 * sa, 1.0 - 2.0 * a + s];
        let unit = |v: [f64; 2]| {
            let n = v[0].hypot(v[1]);
            [v[0] / n, v[1] / n]
        };
        let (p, m) = (unit(plus), unit(minus));
        let e = ComplexMatrix::from_real_rows(&[&[p[0], m[0]], &[p[1], m[1]]]);
        let d_plus = (1.0 + 2.0 * a + s) / 2.0;
        let d_minus = a - 2.0 * a * a / (1.0 + s);
        (e, [d_plus, d_minus])
    }

    fn assemble(lambda: Complex64, diag: [f64; 2]) -> ComplexMatrix {
        let (e, _) = Self::eigen(lambda);
        e.scale_columns(&diag) * e.adjoint()
    }

    pub fn v(lambda: Complex64) -> ComplexMatrix {
        let (_, d) = Self::eigen(lambda);
        Self::assemble(lambda, d)
    }

    pub fn u(lambda: Complex64) -> ComplexMatrix {
        let (_, d) = Self::eigen(lambda);
        Self::assemble(lambda, [d[0], Self::phi(lambda) * d[1]])
    }

    /// Closed form of the factor, valid where `V(λ)` is invertible.
    pub fn w(lambda: Complex64) -> ComplexMatrix {
        Self::assemble(lambda, [1.0, Self::phi(lambda)])
    }

    /// Real samples `1 - 1/(nπ)` (where `φ = 0`) interleaved with `1 - 2/((2n+1)π)`
    /// (where `φ = 1`) for `n` in `n_lo..=n_hi`, ending at `λ = 1`.
    pub fn real_axis_curve(n_lo: u32, n_hi: u32) -> CurveSpec {
        let mut points = Vec::new();
        for n in n_lo..=n_hi {
            let n = n as f64;
            for x in [1.0 - 1.0 / (n * PI), 1.0 - 2.0 / ((2.0 * n + 1.0) * PI)] {
                points.push(CurvePoint { t: x, lambda: Complex64::new(x, 0.0) });
            }
        }
        points.push(CurvePoint { t: 1.0, lambda: Complex64::new(1.0, 0.0) });
        CurveSpec::CustomSampleList { points }
    }
}
