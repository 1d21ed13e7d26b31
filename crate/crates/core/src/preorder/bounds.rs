use serde::Serialize;

use super::{EquivWitness, PreorderWitness};
use crate::numeric::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// `achieved <= claimed`.
    Le,
    /// `achieved >= claimed`.
    Ge,
}

/// One inequality: the bound promised by the theory next to the measured value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub claimed: f64,
    pub achieved: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl BoundCheck {
    pub fn le(name: &str, achieved: f64, claimed: f64, slack: f64) -> Self {
        Self {
            name: name.to_string(),
            claimed,
            achieved,
            relation: Relation::Le,
            pass: achieved <= claimed + slack,
        }
    }

    pub fn ge(name: &str, achieved: f64, claimed: f64, slack: f64) -> Self {
        Self {
            name: name.to_string(),
            claimed,
            achieved,
            relation: Relation::Ge,
            pass: achieved >= claimed - slack,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
    pub pass: bool,
}

impl BoundReport {
    fn new(checks: Vec<BoundCheck>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self { checks, pass }
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy)]
pub enum WitnessRef<'a> {
    Preorder(&'a PreorderWitness),
    Equiv(&'a EquivWitness),
}

impl<'a> From<&'a PreorderWitness> for WitnessRef<'a> {
    fn from(w: &'a PreorderWitness) -> Self {
        WitnessRef::Preorder(w)
    }
}

impl<'a> From<&'a EquivWitness> for WitnessRef<'a> {
    fn from(w: &'a EquivWitness) -> Self {
        WitnessRef::Equiv(w)
    }
}

/// Default additive slack for every bound.
pub const BOUND_SLACK: f64 = 1e-8;

/// Recomputes every norm inequality for a witness from its stored matrices.
pub fn verify_bounds<'a>(w: impl Into<WitnessRef<'a>>) -> BoundReport {
    match w.into() {
        WitnessRef::Preorder(p) => BoundReport::new(preorder_bounds(&p.x, &p.y, p.r, BOUND_SLACK)),
        WitnessRef::Equiv(e) => {
            let mut checks = preorder_bounds(&e.forward.x, &e.forward.y, e.forward.r, BOUND_SLACK);
            checks.extend(prefixed("backward", preorder_bounds(
                &e.backward.x,
                &e.backward.y,
                e.backward.r,
                BOUND_SLACK,
            )));
            checks.extend(equiv_bounds(e, BOUND_SLACK));
            BoundReport::new(checks)
        }
    }
}

fn prefixed(prefix: &str, checks: Vec<BoundCheck>) -> Vec<BoundCheck> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix}.{}", c.name);
            c
        })
        .collect()
}

/// `‖Re Y‖`-type excess `2t - 1`, floored at zero.
fn excess(re_norm: f64) -> f64 {
    (2.0 * re_norm - 1.0).max(0.0)
}

pub(crate) fn preorder_bounds(x: &ComplexMatrix, y: &ComplexMatrix, r: f64, slack: f64) -> Vec<BoundCheck> {
    let nx = x.norm2();
    let (ny, nre) = if y.rows() == 0 { (1.0, 1.0) } else { (y.norm2(), y.real_part().norm2()) };
    let ex = excess(nre);
    vec![
        BoundCheck::le("x_by_y", nx, ny + ex.sqrt(), slack),
        BoundCheck::le("y_by_x", ny, 1.0 + nx, slack),
        BoundCheck::le("x_by_r", nx, (2.0 + 2.0 * r.sqrt() + r) / (2.0 * r), slack),
        BoundCheck::le("y_by_r", ny, (2.0 + r) / (2.0 * r), slack),
        BoundCheck::ge("r_by_y", r, 1.0 / (ny + (ny * ny + ex).sqrt()), slack),
    ]
}

fn alpha(t: f64) -> f64 {
    t + (1.0 + t * t).sqrt()
}

pub(crate) fn equiv_bounds(e: &EquivWitness, slack: f64) -> Vec<BoundCheck> {
    let nxt = e.x_tilde.norm2();
    let nyt = e.y_tilde.norm2();
    let nxtp = e.x_tilde_prime.norm2();
    let nx = e.forward.x.norm2();
    let nxp = e.backward.x.norm2();
    let ny = e.forward.y.norm2();
    let nyp = e.backward.y.norm2();
    let nre_yp = if e.backward.y.rows() == 0 { 1.0 } else { e.backward.y.real_part().norm2() };
    vec![
        BoundCheck::le("x_tilde_by_x", nxt, nx * (2.0 * nxp + 1.0).sqrt(), slack),
        BoundCheck::le("y_tilde_by_y", nyt, ny * excess(nre_yp).sqrt(), slack),
        BoundCheck::le("y_by_y_tilde", ny, 2.0 * nyt * nyt, slack),
        BoundCheck::le("y_prime_by_y_tilde", nyp, 2.0 * nyt * nyt, slack),
        BoundCheck::le("x_prime_by_x_tilde", nxp, nxt * alpha(nxt), slack),
        BoundCheck::le("x_by_x_tilde_prime", nx, nxtp * alpha(nxtp), slack),
        BoundCheck::le("m_by_y_tilde", e.derived_m.norm2(), 2.0 * nyt, slack),
        BoundCheck::le("m_prime_by_alpha", e.derived_m_prime.norm2(), alpha(nxt), slack),
        BoundCheck::le("derived_y_by_y_tilde", e.derived_y.norm2(), 2.0 * nyt * nyt, slack),
        BoundCheck::le("derived_x_prime_by_x_tilde", e.derived_x_prime.norm2(), nxt * alpha(nxt), slack),
    ]
}
