//! Independent numerical machinery used to verify the closed forms.
//!
//! Nothing in this module evaluates a Fox H-function or a Mittag-Leffler
//! series through the [`crate::specfun`] fast paths it is meant to check:
//! the solver, inverter and differencers here reach the same quantities
//! through finite differences, contour quadrature of Laplace transforms,
//! and characteristic-curve integration.

mod caputo;
mod charfn;
mod gl;
mod grid;
mod laplace;
mod quad;

pub use caputo::{
    caputo_l1_derivative, caputo_l1_solve, caputo_l1_solve_point_mass, discrete_weighted_mass,
    point_mass_initial, CaputoOptions,
};
pub use charfn::{charfn_ode_solve, charfn_time_domain, mixed_transform_series};
pub use gl::{gl_frac_derivative, gl_weights};
pub use grid::GridSpec;
pub use laplace::bromwich_invert;
pub use quad::{adaptive_quad, adaptive_quad_with, QuadOpts};

use thiserror::Error;

/// Errors raised by the oracle layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// Quadrature could not reach the requested tolerance.
    #[error("quadrature tolerance not met: achieved {achieved:.3e}, requested {requested:.3e}")]
    ToleranceNotMet { achieved: f64, requested: f64 },

    /// Grünwald–Letnikov stencil ran out of left history.
    #[error("insufficient history for fractional difference at index {index}")]
    InsufficientHistory { index: usize },

    /// Grid or scheme parameters rejected before time stepping.
    #[error("grid/scheme rejected: {reason}")]
    GridRejected { reason: String },

    /// The Bromwich contour failed to produce a stable value.
    #[error("laplace inversion contour failure: {reason}")]
    ContourFailure { reason: String },

    /// Characteristic-curve integration became unstable.
    #[error("characteristic ODE integration stiff beyond k = {k_max}")]
    Stiffness { k_max: f64 },

    /// Invalid call arguments.
    #[error("invalid oracle arguments: {reason}")]
    InvalidArguments { reason: String },
}
