//! Model parameters and sampled-profile containers.

use crate::closed_form::ClosedFormError;
use crate::specfun::{bessel_k_complex, SpecFunError};
use num_complex::Complex64;
use serde::Serialize;

/// Memory kernel of the diffusion coefficient D(x,t) = D(t) |x|^{-θ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelKind {
    /// D(t) = D δ(t): memoryless transport.
    Impulsive,
    /// D(t) = D t^{α-1}/Γ(α): power-law memory with exponent α > 0.
    PowerLaw,
}

/// Physical and model parameters of the generalized diffusion equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// Time-fractional (Caputo) order, 0 < γ ≤ 1.
    pub gamma: f64,
    /// Spatial fractional (Riesz–Weyl) order μ.
    pub mu: f64,
    /// Nonlinearity exponent ν in [ρ]^ν.
    pub nu: f64,
    /// Diffusion-coefficient power θ in D(x,t) ∝ |x|^{-θ}.
    pub theta: f64,
    /// Spatial dimension N ≥ 1.
    pub n_dim: u32,
    /// Diffusion amplitude D > 0.
    pub d_coeff: f64,
    /// Drift amplitude 𝒦 (the meaning of the drift field is per-operation).
    pub k_drift: f64,
    /// Memory-kernel exponent α (used only with [`KernelKind::PowerLaw`]).
    pub alpha_mem: f64,
    /// Kernel selection.
    pub kernel: KernelKind,
}

impl ModelParams {
    /// Baseline parameter set: classical diffusion in one dimension
    /// (γ=1, μ=2, ν=1, θ=0, N=1, D=1, no drift, impulsive kernel).
    pub fn classical() -> Self {
        Self {
            gamma: 1.0,
            mu: 2.0,
            nu: 1.0,
            theta: 0.0,
            n_dim: 1,
            d_coeff: 1.0,
            k_drift: 0.0,
            alpha_mem: 1.0,
            kernel: KernelKind::Impulsive,
        }
    }

    /// Global invariants shared by every operation.
    pub fn validate(&self) -> Result<(), ClosedFormError> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(ClosedFormError::Admissibility {
                reason: format!("gamma = {} outside (0, 1]", self.gamma),
            });
        }
        if !(self.d_coeff > 0.0) {
            return Err(ClosedFormError::Admissibility {
                reason: format!("d_coeff = {} must be positive", self.d_coeff),
            });
        }
        if self.n_dim < 1 {
            return Err(ClosedFormError::Admissibility {
                reason: "n_dim must be at least 1".into(),
            });
        }
        if self.kernel == KernelKind::PowerLaw && !(self.alpha_mem > 0.0) {
            return Err(ClosedFormError::Admissibility {
                reason: format!("alpha_mem = {} must be positive for a power-law kernel", self.alpha_mem),
            });
        }
        Ok(())
    }

    pub fn n_f(&self) -> f64 {
        f64::from(self.n_dim)
    }

    /// 2 + θ, the structural exponent of the radial operator; must be
    /// positive for the Green-function cases.
    pub fn w(&self) -> f64 {
        2.0 + self.theta
    }
}

/// Provenance of a sampled density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

/// Error bookkeeping for a profile: one bound for every point or a bound
/// per point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ErrorEstimate {
    Global(f64),
    PerPoint(Vec<f64>),
}

/// A density sampled over a strictly increasing grid at one time.
///
/// Profiles represent the symmetric full-line density ρ(|x|, t) sampled
/// at positive positions; weighted integrals double the half-line value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    x_grid: Vec<f64>,
    values: Vec<f64>,
    pub t: f64,
    pub params: ModelParams,
    pub source: Provenance,
    pub error_estimate: ErrorEstimate,
}

impl Profile {
    pub fn new(
        x_grid: Vec<f64>,
        values: Vec<f64>,
        t: f64,
        params: ModelParams,
        source: Provenance,
        error_estimate: ErrorEstimate,
    ) -> Result<Self, ClosedFormError> {
        if x_grid.len() != values.len() || x_grid.is_empty() {
            return Err(ClosedFormError::Admissibility {
                reason: "profile grid and values must be nonempty and equal length".into(),
            });
        }
        if !x_grid.windows(2).all(|w| w[1] > w[0]) {
            return Err(ClosedFormError::Admissibility {
                reason: "profile grid must be strictly increasing".into(),
            });
        }
        if let ErrorEstimate::PerPoint(e) = &error_estimate {
            if e.len() != values.len() {
                return Err(ClosedFormError::Admissibility {
                    reason: "per-point error estimate length mismatch".into(),
                });
            }
        }
        Ok(Self {
            x_grid,
            values,
            t,
            params,
            source,
            error_estimate,
        })
    }

    pub fn x_grid(&self) -> &[f64] {
        &self.x_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.x_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_grid.is_empty()
    }
}

/// Laplace-domain Green-function symbols of the radial μ=2, ν=1 problem.
///
/// The substitution y = A(s) x^v, G̃ = C(s) y^δ K_λ(y) turns the
/// transformed equation into a modified Bessel equation with
///
/// v = (2+θ)/2,  λ = δ = (2+θ-N)/(2+θ),
/// A(s) = (1/v) √(s^γ / D̃(s)),
///
/// and C(s) fixed by ∫₀^∞ x^{N-1} G̃ dx = 1/(2s). These are kept as a
/// standalone type because they drive the Laplace-domain cross-checks of
/// the real-time propagators.
#[derive(Debug, Clone, Copy)]
pub struct LaplaceGreenParams {
    pub v: f64,
    pub lambda: f64,
    pub delta: f64,
    gamma: f64,
    d_coeff: f64,
    n_f: f64,
    alpha_mem: f64,
    kernel: KernelKind,
}

impl LaplaceGreenParams {
    pub fn from_model(p: &ModelParams) -> Result<Self, ClosedFormError> {
        p.validate()?;
        let w = p.w();
        if !(w > 0.0) {
            return Err(ClosedFormError::Admissibility {
                reason: format!("2 + theta = {w} must be positive"),
            });
        }
        let n = p.n_f();
        Ok(Self {
            v: w / 2.0,
            lambda: (w - n) / w,
            delta: (w - n) / w,
            gamma: p.gamma,
            d_coeff: p.d_coeff,
            n_f: n,
            alpha_mem: p.alpha_mem,
            kernel: p.kernel,
        })
    }

    /// D̃(s): Laplace transform of the kernel amplitude.
    pub fn d_tilde(&self, s: Complex64) -> Complex64 {
        match self.kernel {
            KernelKind::Impulsive => Complex64::new(self.d_coeff, 0.0),
            KernelKind::PowerLaw => self.d_coeff * s.powf(-self.alpha_mem),
        }
    }

    /// Scale function A(s) = (1/v) (s^γ / D̃(s))^{1/2}.
    pub fn a_of_s(&self, s: Complex64) -> Complex64 {
        (s.powf(self.gamma) / self.d_tilde(s)).sqrt() / self.v
    }

    /// Normalization C(s) from the weighted half-line mass 1/(2s):
    /// C(s) = w/(Γ(N/w) s) · A(s)^{2N/w} · 2^{-(w+N)/w}.
    pub fn c_of_s(&self, s: Complex64) -> Result<Complex64, SpecFunError> {
        let w = 2.0 * self.v;
        let n = self.n_f;
        let g = crate::specfun::gamma_fn(n / w)?.value;
        let a = self.a_of_s(s);
        Ok(w / (g * s) * a.powf(2.0 * n / w) * 2.0f64.powf(-(w + n) / w))
    }

    /// Laplace-domain Green function G̃(x, s) for complex s (right of the
    /// origin, off the negative axis).
    pub fn g_tilde(&self, x: f64, s: Complex64) -> Result<Complex64, SpecFunError> {
        let xv = x.abs().powf(self.v);
        let y = self.a_of_s(s) * xv;
        let k = bessel_k_complex(self.lambda, y)?;
        let c = self.c_of_s(s)?;
        Ok(c * y.powf(self.delta) * k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplace_symbols_match_definitions() {
        let mut p = ModelParams::classical();
        p.theta = 0.5;
        p.n_dim = 2;
        let lg = LaplaceGreenParams::from_model(&p).unwrap();
        assert!((lg.v - 1.25).abs() < 1e-15);
        assert!((lg.lambda - 0.5 / 2.5).abs() < 1e-15);
        assert_eq!(lg.lambda, lg.delta);
    }

    #[test]
    fn profile_rejects_bad_grid() {
        let p = ModelParams::classical();
        assert!(Profile::new(
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 1.0],
            1.0,
            p,
            Provenance::ClosedForm,
            ErrorEstimate::Global(0.0),
        )
        .is_err());
        assert!(Profile::new(
            vec![],
            vec![],
            1.0,
            p,
            Provenance::ClosedForm,
            ErrorEstimate::Global(0.0),
        )
        .is_err());
    }

    #[test]
    fn params_validation() {
        let mut p = ModelParams::classical();
        p.gamma = 1.5;
        assert!(p.validate().is_err());
        p.gamma = 0.5;
        assert!(p.validate().is_ok());
        p.d_coeff = 0.0;
        assert!(p.validate().is_err());
    }
}
