//! Closed-form solutions of the generalized fractional diffusion model:
//! Green functions, their asymptotics and moments, the mixed space-time
//! fractional series solution, and the similarity (scaling) solutions.
//!
//! Every solution is evaluated in |x| and mirrored across the origin;
//! densities are normalized against the weighted measure |x|^{N-1} dx
//! under which the model conserves mass.

mod green;
mod mixed;
mod params;
mod similarity;

pub use green::{
    asymptotic_case1, green_case1, green_case2, green_drift_power, moment_exponent,
    propagator_weighted_mass, sample_propagator, solve_from_green, AsymptoticEval,
    InitialCondition, Propagator, Regime, ASYMPTOTIC_ARGUMENT_THRESHOLD,
};
pub use mixed::{mixed_charfn, mixed_density, MIXED_MAX_TERMS};
pub use params::{
    ErrorEstimate, KernelKind, LaplaceGreenParams, ModelParams, Profile, Provenance,
};
pub use similarity::{
    norm_amplitude, phi_scale, scaled_exponents, scaled_solution, tsallis_q, tsallis_tail_exponent,
    ScaledSolutionSpec, SupportRegion,
};

use crate::oracle::OracleError;
use crate::specfun::SpecFunError;
use thiserror::Error;

/// Errors raised by closed-form evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    /// Parameter set outside the operation's admissible class.
    #[error("inadmissible parameters: {reason}")]
    Admissibility { reason: String },

    /// The drift solution requires α_drift + θ + 1 = 0.
    #[error("drift constraint violated: alpha_drift = {alpha_drift}, theta = {theta} (need alpha_drift + theta + 1 = 0)")]
    DriftConstraint { alpha_drift: f64, theta: f64 },

    /// A scaling-exponent denominator vanished.
    #[error("degenerate denominator in {what}")]
    DegenerateDenominator { what: String },

    /// φ(t) left its positive domain.
    #[error("phi_scale domain exit at t = {t}: u(t) = {u} ≤ 0")]
    PhiDomain { t: f64, u: f64 },

    /// Similarity-region preconditions violated.
    #[error("support-region violation: mu = {mu}, theta = {theta} not in the {region} region")]
    RegionViolation {
        mu: f64,
        theta: f64,
        region: String,
    },

    /// Evaluation at a structural singularity (e.g. x = 0 in the mixed case).
    #[error("singular point: {what}")]
    SingularPoint { what: String },

    /// Series truncation budget exhausted before the tail bound was met.
    #[error("truncation budget of {budget} terms exhausted; tail estimate {tail:.3e}")]
    TruncationBudget { budget: usize, tail: f64 },

    #[error(transparent)]
    SpecFun(#[from] SpecFunError),

    #[error(transparent)]
    Oracle(#[from] OracleError),
}
