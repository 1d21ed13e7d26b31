//! Matrix-valued Schur-class functions on the unit disc: constructor trees, grid sampling,
//! pointwise witness profiles for the function-level pre-order, and boundary probes.

mod classify;
mod continuity;
mod function;
mod grid;
mod probes;
mod profile;
mod rank;

pub use classify::{
    classify_equiv_infty, classify_preceq_infty, Corroboration, EquivInftyReport, PreceqInftyReport,
    TildePoint, TildeProfile, Verdict, CORROBORATION_SAMPLES,
};
pub use continuity::{
    continuity_probe, BoundaryDiscontinuousFactor, ContinuityPolicy, ContinuityReport, ContinuitySample,
    TailVerdict,
};
pub use function::{
    redheffer_value, Node, RedhefferBlocks, SchurFunction, REDHEFFER_COND_CAP, VALIDATION_POINTS,
    VALIDATION_RADIUS, VALIDATION_TOL,
};
pub use grid::{sup_norm_estimate, CurvePoint, CurveSpec, GridPoint, SamplingGrid};
pub use probes::{
    boundary_bound_check, radial_probe, BoundaryBoundReport, Premise, RadialProbeReport, RadialRow,
    VACUOUS_GAP,
};
pub use profile::{
    pointwise_witness_profile, pointwise_witness_profile_with, DivergencePolicy, ProfileClass,
    ProfilePoint, RadiusTrace, WitnessProfile,
};
pub use rank::{rank_profile, RankPoint, RankProfile};

use crate::numeric::{Complex64, NumericError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchurError {
    #[error("λ = {lambda} is outside the domain of this function")]
    Domain { lambda: Complex64 },
    #[error("invalid function: {0}")]
    Invalid(String),
    #[error("value at λ = {lambda} has norm {norm:.6e} > 1")]
    NotContractive { norm: f64, lambda: Complex64 },
    #[error("near-singular evaluation at λ = {lambda} (condition number {cond:.3e})")]
    Singular { lambda: Complex64, cond: f64 },
    #[error("majorization fails at t = {t}: min eig(V*V - U*U) = {min_eig:.3e}")]
    Majorization { t: f64, min_eig: f64 },
    #[error("invalid grid or curve: {0}")]
    BadGrid(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
