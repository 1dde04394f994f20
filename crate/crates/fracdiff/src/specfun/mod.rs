//! Special functions underlying the closed-form solutions.
//!
//! Everything here is real-valued on the user-facing surface; complex
//! arithmetic is internal to the Mellin–Barnes contour quadrature. All
//! functions are pure and thread-safe. Evaluations return [`Eval`]
//! (value + absolute error estimate).
//!
//! The Fox H-function convention is pinned operationally by two reduction
//! identities rather than by any single reference (conventions differ
//! across the literature):
//!
//! * `H^{1,0}_{0,1}[z | (0,1)] = exp(-z)`
//! * `H^{2,0}_{0,2}[z²/4 | (λ/2,1), (-λ/2,1)] = 2 K_λ(z)`
//!
//! Both identities are enforced by tests; see [`foxh`] for the resulting
//! Mellin–Barnes kernel.

mod bessel;
mod foxh;
mod gamma;
mod mittag;

pub use bessel::{bessel_k_complex, bessel_k_mod};
pub use foxh::{fox_h, fox_h_with_tol, HParams};
pub use gamma::{digamma, gamma_fn, inv_gamma_with_deriv, lgamma_complex, lgamma_signed};
pub use mittag::{mittag_leffler, ML_SERIES_LIMIT};

use thiserror::Error;

/// Errors raised by special-function evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    /// Gamma pole hit exactly (x a non-positive integer).
    #[error("gamma function pole at x = {x}")]
    GammaPole { x: f64 },

    /// Modified Bessel K requires a strictly positive argument.
    #[error("bessel_k_mod domain error: x = {x} (requires x > 0)")]
    BesselDomain { x: f64 },

    /// Mittag-Leffler parameters outside the implemented accuracy envelope.
    /// Reported rather than silently degraded.
    #[error("mittag_leffler({alpha}, {beta}, {z}) outside accuracy envelope: {reason}")]
    MittagLefflerEnvelope {
        alpha: f64,
        beta: f64,
        z: f64,
        reason: String,
    },

    /// Structurally invalid Fox H parameter block.
    #[error("invalid H-function parameters: {reason}")]
    InvalidHParams { reason: String },

    /// The two Mellin–Barnes pole families cannot be separated by a contour.
    #[error("H-function contour selection failed: pole families not separable")]
    PolesNotSeparable,

    /// A pole of multiplicity three or more; outside the supported classes.
    #[error("H-function pole of order {order} at s = {location}; only simple and double poles are supported")]
    UnsupportedPoleOrder { order: usize, location: f64 },

    /// Quadrature or series did not reach the requested accuracy.
    /// Carries the achieved error estimate.
    #[error("accuracy target not met: achieved {achieved:.3e}, requested {requested:.3e}")]
    AccuracyNotMet { achieved: f64, requested: f64 },
}
