//! `check`, `profile` and `redheffer`.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use schur_order::numeric::ComplexMatrix;
use schur_order::preorder::{check_equiv, check_preceq, Contraction, PreorderError};
use schur_order::redheffer::{
    apply, boundary_tilde_witnesses, defect_inequality_check, pullback_equiv, transport_equiv, transport_preorder,
    RedhefferCoefficients, RedhefferError, TransportCertificate,
};
use schur_order::schur::{
    classify_equiv_infty, classify_preceq_infty, pointwise_witness_profile, sup_norm_estimate, SchurError, Verdict,
    WitnessProfile,
};

use crate::input::{parse_coefficients, parse_input, parse_split};
use crate::report::{num, Format, Report, Status, Table};
use crate::{CliError, Config};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Preceq,
    Equiv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RedhefferMode {
    /// `R_Φ[F]` with its defect inequalities.
    Apply,
    /// Transport `F ∼∞ G` to `R[F] ∼∞ R[G]`.
    Equiv,
    /// Transport `F ≺∞ G` to `R[F] ≺∞ R[G]`.
    Preceq,
    /// Recover the boundary witness of `F ∼ G` from that of `R[F] ∼ R[G]`.
    Pullback,
}

fn schur_err(e: SchurError) -> CliError {
    CliError::input(e.to_string())
}

/// A 1x1 matrix as a number (or `[re, im]`).
fn scalar_value(m: &ComplexMatrix) -> Option<Value> {
    (m.shape() == (1, 1)).then(|| {
        let z = m.get(0, 0);
        if z.im == 0.0 {
            num(z.re)
        } else {
            json!([num(z.re), num(z.im)])
        }
    })
}

fn contraction(m: ComplexMatrix, cfg: &Config, which: &str) -> Result<Contraction, CliError> {
    Contraction::new(m, &cfg.tol).map_err(|e| CliError::input(format!("{which}: {e}")))
}

fn preorder_failure(cmd: &str, e: PreorderError) -> Result<Report, CliError> {
    match e {
        PreorderError::Refused(r) => Ok(Report::new(cmd, Status::Refused, "refused")
            .with("direction", serde_json::to_value(r.direction).expect("serializes"))
            .with_num("residual", r.residual)
            .with("message", r.message)),
        PreorderError::Numeric(e) => Err(CliError::input(e.to_string())),
        other => Ok(Report::new(cmd, Status::Inconclusive, "inconclusive").with("message", other.to_string())),
    }
}

fn verdict_status(v: Verdict) -> Status {
    match v {
        Verdict::Supported => Status::Success,
        Verdict::RefutedDiverging | Verdict::RefutedPointwise => Status::Refused,
        Verdict::Inconclusive => Status::Inconclusive,
    }
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn growth_table(p: &WitnessProfile) -> Table {
    Table {
        title: "per-radius maxima of ‖Q‖".into(),
        columns: vec!["radius".into(), "max_q".into(), "ratio".into()],
        rows: p.growth_ratios.iter().map(|t| vec![t.radius, t.max_q, t.ratio.unwrap_or(f64::NAN)]).collect(),
    }
}

fn profile_summary(r: Report, p: &WitnessProfile) -> Report {
    r.with_num("sup_q", p.sup_q)
        .with_num("sup_r", p.sup_r)
        .with_num("inf_r_lambda", p.inf_r_lambda)
        .with("classification", serde_json::to_value(p.classification).expect("serializes"))
        .with("points", p.points.len())
        .with("refusals", p.refusals)
}

pub fn check(cfg: &Config, mode: Mode, a: &str, b: &str) -> Result<Report, CliError> {
    let (a, b) = (parse_input(a)?, parse_input(b)?);
    if let (Some(ma), Some(mb)) = (a.constant(), b.constant()) {
        let (ca, cb) = (contraction(ma, cfg, "A")?, contraction(mb, cfg, "B")?);
        if ca.matrix.shape() != cb.matrix.shape() {
            return Err(CliError::input(format!("shapes differ: {:?} vs {:?}", ca.matrix.shape(), cb.matrix.shape())));
        }
        return match mode {
            Mode::Preceq => match check_preceq(&ca, &cb, &cfg.tol) {
                Ok(w) => {
                    let mut r = Report::new("check", Status::Success, "A ≺ B");
                    if let Some(x) = scalar_value(&w.x) {
                        r = r.with("x", x);
                    }
                    if let Some(y) = scalar_value(&w.y) {
                        r = r.with("y", y);
                    }
                    Ok(r.with_num("norm_x", w.x.norm2())
                        .with_num("norm_y", w.y.norm2())
                        .with_num("r", w.r)
                        .with_num("residual_x", w.residuals.x)
                        .with_num("residual_y", w.residuals.y)
                        .with_num("min_eig_2re_y_minus_i", w.residuals.min_eig_2re_y_minus_i)
                        .with("bounds_pass", w.bounds.iter().all(|b| b.pass))
                        .with_detail(&w))
                }
                Err(e) => preorder_failure("check", e),
            },
            Mode::Equiv => match check_equiv(&ca, &cb, &cfg.tol) {
                Ok(w) => {
                    let mut r = Report::new("check", Status::Success, "A ∼ B");
                    if let Some(x) = scalar_value(&w.x_tilde) {
                        r = r.with("x_tilde", x);
                    }
                    Ok(r.with_num("norm_x_tilde", w.x_tilde.norm2())
                        .with_num("norm_y_tilde", w.y_tilde.norm2())
                        .with("bounds_pass", w.bounds.iter().all(|b| b.pass))
                        .with_detail(&w))
                }
                Err(e) => preorder_failure("check", e),
            },
        };
    }
    let (f, g) = (a.into_function()?, b.into_function()?);
    match mode {
        Mode::Preceq => {
            let rep = classify_preceq_infty(&f, &g, &cfg.grid, &cfg.tol).map_err(schur_err)?;
            let mut r = Report::new("check", verdict_status(rep.verdict), verdict_name(rep.verdict));
            r = profile_summary(r, &rep.profile);
            if let Some(c) = &rep.corroboration {
                r = r.with_num("corroboration_radius", c.r).with_num("corroboration_max_norm", c.max_norm);
            }
            r.tables.push(growth_table(&rep.profile));
            Ok(r.with_detail(&rep))
        }
        Mode::Equiv => {
            let rep = classify_equiv_infty(&f, &g, &cfg.grid, &cfg.tol).map_err(schur_err)?;
            let mut r = Report::new("check", verdict_status(rep.verdict), verdict_name(rep.verdict))
                .with("forward", verdict_name(rep.forward.verdict))
                .with("backward", verdict_name(rep.backward.verdict))
                .with_num("sup_q", rep.forward.profile.sup_q)
                .with_num("sup_q_backward", rep.backward.profile.sup_q)
                .with_num("sup_q_tilde", rep.tilde.sup_q_tilde)
                .with("tilde_bound_violations", rep.tilde.bound_violations);
            r.tables.push(growth_table(&rep.forward.profile));
            Ok(r.with_detail(&rep))
        }
    }
}

pub fn profile(cfg: &Config, f: &str, g: &str, csv: Option<&Path>, format: Format) -> Result<Report, CliError> {
    let (f, g) = (parse_input(f)?.into_function()?, parse_input(g)?.into_function()?);
    let p = pointwise_witness_profile(&f, &g, &cfg.grid, &cfg.tol).map_err(schur_err)?;
    let body = p.to_csv();
    let mut r = profile_summary(Report::new("profile", Status::Success, "profile written"), &p);
    match csv {
        Some(path) => {
            fs::write(path, &body).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            r = r.with("csv", path.display().to_string());
        }
        None if format == Format::Csv => r.csv_body = Some(body),
        None => r.verdict = "profile computed".into(),
    }
    r.tables.push(growth_table(&p));
    Ok(r)
}

fn redheffer_failure(e: RedhefferError) -> Result<Report, CliError> {
    let status = match &e {
        RedhefferError::Refused(_) | RedhefferError::DomainAsymmetry { .. } => Status::Refused,
        RedhefferError::HypothesisUnmet(_) | RedhefferError::Factor { .. } | RedhefferError::Numeric(_) => {
            Status::Inconclusive
        }
        RedhefferError::Schur(SchurError::Singular { .. }) => Status::Inconclusive,
        _ => return Err(CliError::input(e.to_string())),
    };
    let verdict = if status == Status::Refused { "refused" } else { "hypothesis unmet" };
    Ok(Report::new("redheffer", status, verdict).with("message", e.to_string()))
}

fn certificate_report(cert: &TransportCertificate, verdict: &str) -> Report {
    let status = if cert.pass { Status::Success } else { Status::Inconclusive };
    let mut r = Report::new("redheffer", status, verdict)
        .with_num("sup_transported", cert.sup_transported)
        .with_num("input_sup", cert.input_sup)
        .with_num("max_residual", cert.max_residual)
        .with_num("domain_norm_first", cert.domain_norms.0)
        .with_num("domain_norm_second", cert.domain_norms.1)
        .with("points", cert.points.len())
        .with("pass", cert.pass);
    if let Some(n) = cert.sup_n {
        r = r.with_num("sup_n", n);
    }
    if let Some(n) = cert.max_inverse_norm {
        r = r.with_num("max_inverse_norm", n);
    }
    r.with_detail(cert)
}

pub fn redheffer(
    cfg: &Config,
    mode: RedhefferMode,
    phi: &str,
    split: Option<&str>,
    f: &str,
    g: Option<&str>,
) -> Result<Report, CliError> {
    let split = split.map(parse_split).transpose()?;
    let phi: RedhefferCoefficients = parse_coefficients(phi, split)?;
    let f = parse_input(f)?.into_function()?;
    let g = || -> Result<_, CliError> {
        let raw = g.ok_or_else(|| CliError::input("this mode needs --g"))?;
        parse_input(raw)?.into_function()
    };
    let outcome = match mode {
        RedhefferMode::Apply => apply_report(cfg, &phi, &f),
        RedhefferMode::Equiv => {
            transport_equiv(&phi, &f, &g()?, &cfg.grid, &cfg.tol).map(|c| certificate_report(&c, "R[F] ∼ R[G] transported"))
        }
        RedhefferMode::Preceq => transport_preorder(&phi, &f, &g()?, &cfg.grid, &cfg.tol)
            .map(|c| certificate_report(&c, "R[F] ≺ R[G] transported")),
        RedhefferMode::Pullback => {
            let g = g()?;
            boundary_tilde_witnesses(&phi, &f, &g, &cfg.grid, &cfg.tol)
                .and_then(|qt| pullback_equiv(&phi, &f, &g, &qt, &cfg.grid, &cfg.tol))
                .map(|rep| {
                    let status = if rep.pass { Status::Success } else { Status::Inconclusive };
                    Report::new("redheffer", status, "boundary witness pulled back")
                        .with_num("max_residual", rep.max_residual)
                        .with_num("max_discrepancy", rep.max_discrepancy)
                        .with("samples", rep.points.len())
                        .with_detail(&rep)
                })
        }
    };
    outcome.or_else(redheffer_failure)
}

fn apply_report(cfg: &Config, phi: &RedhefferCoefficients, f: &schur_order::schur::SchurFunction) -> Result<Report, RedhefferError> {
    let domain = phi.domain_norm(f)?;
    let r = apply(phi, f)?;
    let ineq = defect_inequality_check(phi, f, &cfg.grid, &cfg.tol)?;
    let sup = sup_norm_estimate(&r, &cfg.grid)?;
    let status = if ineq.pass { Status::Success } else { Status::Inconclusive };
    let mut rep = Report::new("redheffer", status, "R[F] computed")
        .with_num("domain_norm", domain)
        .with("shape", json!([r.out_dim(), r.in_dim()]))
        .with_num("sup_norm", sup)
        .with_num("min_gap_first", ineq.min_gap_first)
        .with_num("min_gap_second", ineq.min_gap_second);
    if let Some(e) = ineq.boundary_equality_first {
        rep = rep.with_num("boundary_equality_first", e);
    }
    if let Some(e) = ineq.boundary_equality_second {
        rep = rep.with_num("boundary_equality_second", e);
    }
    Ok(rep.with_detail(&json!({ "r": r, "defect_inequalities": ineq })))
}
