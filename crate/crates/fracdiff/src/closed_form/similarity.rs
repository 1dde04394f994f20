//! Similarity (scaling) solutions of the γ=1 case with linear drift
//! F(x) = -𝒦x and arbitrary μ, θ, ν:
//!
//! ρ(x,t) = φ(t)^{-N} ρ̄(z),  z = |x|/φ(t),
//! ρ̄(z) = 𝒜 [ z^{(μ+θ)(1+μ+θ)} / (1+bz)^{(1-μ)(1+μ+θ)} ]^{1/(1-2μ-θ)},
//!
//! where the scale φ solves φ̇/φ² + 𝒦/φ = kD/φ^{ξ+1}, ξ = N(ν-1)+θ+μ:
//!
//! φ(t) = [ φ(0)^ξ e^{-ξ𝒦t} + (Dk/𝒦)(1 - e^{-ξ𝒦t}) ]^{1/ξ}
//!
//! (the sign in the second exponential is forced by the defining ODE and
//! is verified by a residual test), and for 𝒦 = 0
//! φ(t) = (φ(0)^ξ + ξ k D t)^{1/ξ}.
//!
//! Two normalizable regions are supported with the sign b = ∓1:
//! compact support on |z| ≤ 1 for μ < -1-θ, θ ≥ 0, and infinite support
//! with power-law tails for 0 < μ < 1/2, 0 ≤ θ < 1/2 - μ. Normalization
//! amplitudes follow from Beta integrals; the constant k then follows
//! from 𝒜^{ν-1} = -k Γ(-β)/Γ(α+1).

use crate::closed_form::{ClosedFormError, ModelParams};
use crate::specfun::gamma_fn;
use crate::Eval;
use serde::Serialize;

/// Support class of the similarity solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SupportRegion {
    /// b = -1, -∞ < μ < -1-θ, θ ≥ 0: density vanishes at |z| = 1 and
    /// beyond.
    BoundedSupport,
    /// b = +1, 0 < μ < 1/2, 0 ≤ θ < 1/2-μ: density positive on the whole
    /// line with tail |z|^{-(1+μ+θ)}.
    InfiniteSupport,
}

impl SupportRegion {
    pub fn b_sign(self) -> f64 {
        match self {
            SupportRegion::BoundedSupport => -1.0,
            SupportRegion::InfiniteSupport => 1.0,
        }
    }

    fn check(self, mu: f64, theta: f64) -> Result<(), ClosedFormError> {
        let ok = match self {
            SupportRegion::BoundedSupport => mu < -1.0 - theta && theta >= 0.0,
            SupportRegion::InfiniteSupport => {
                0.0 < mu && mu < 0.5 && (0.0..0.5 - mu).contains(&theta)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(ClosedFormError::RegionViolation {
                mu,
                theta,
                region: format!("{self:?}"),
            })
        }
    }
}

/// Scaling-ansatz exponents:
///
/// α = (2-μ)(μ+θ)/(1-2μ-θ),  β = -(μ-1)(μ-2)/(1-2μ-θ),  ν = (2-μ)/(1+μ+θ).
pub fn scaled_exponents(mu: f64, theta: f64) -> Result<(f64, f64, f64), ClosedFormError> {
    let d1 = 1.0 - 2.0 * mu - theta;
    let d2 = 1.0 + mu + theta;
    if d1 == 0.0 {
        return Err(ClosedFormError::DegenerateDenominator {
            what: "1 - 2μ - θ".into(),
        });
    }
    if d2 == 0.0 {
        return Err(ClosedFormError::DegenerateDenominator {
            what: "1 + μ + θ".into(),
        });
    }
    let alpha = (2.0 - mu) * (mu + theta) / d1;
    let beta = -(mu - 1.0) * (mu - 2.0) / d1;
    let nu = (2.0 - mu) / d2;
    Ok((alpha, beta, nu))
}

/// Normalization amplitude 𝒜 of the similarity density (N = 1 measure).
///
/// Bounded support: 𝒜 = Γ(1-μ-θ) / (2 Γ((μ²+μθ-2μ-2θ)/(1-2μ-θ)) Γ((1-μ+μ²+2μθ+θ²)/(1-2μ-θ))).
/// Infinite support: 𝒜 = Γ((1+θ-μ²-μθ)/(1-2μ-θ)) / (2 Γ((1-μ+μ²+2μθ+θ²)/(1-2μ-θ)) Γ(μ+θ)).
pub fn norm_amplitude(mu: f64, theta: f64, region: SupportRegion) -> Result<f64, ClosedFormError> {
    region.check(mu, theta)?;
    let d1 = 1.0 - 2.0 * mu - theta;
    let p_plus_1 = (1.0 - mu + mu * mu + 2.0 * mu * theta + theta * theta) / d1;
    match region {
        SupportRegion::BoundedSupport => {
            let r_plus_1 = (mu * mu + mu * theta - 2.0 * mu - 2.0 * theta) / d1;
            let num = gamma_fn(1.0 - mu - theta)?.value;
            let den = 2.0 * gamma_fn(r_plus_1)?.value * gamma_fn(p_plus_1)?.value;
            Ok(num / den)
        }
        SupportRegion::InfiniteSupport => {
            let minus_r = (1.0 + theta - mu * mu - mu * theta) / d1;
            let num = gamma_fn(minus_r)?.value;
            let den = 2.0 * gamma_fn(p_plus_1)?.value * gamma_fn(mu + theta)?.value;
            Ok(num / den)
        }
    }
}

/// Fully determined similarity solution: exponents, support sign,
/// normalization amplitude, the constant k recovered from 𝒜, the scale
/// exponent ξ and the initial scale φ(0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaledSolutionSpec {
    pub alpha_s: f64,
    pub beta_s: f64,
    pub nu_s: f64,
    pub b_sign: f64,
    pub amplitude: f64,
    pub k_const: f64,
    pub xi: f64,
    pub phi0: f64,
    pub mu: f64,
    pub theta: f64,
    pub region: SupportRegion,
}

impl ScaledSolutionSpec {
    /// Builds the normalized solution for one of the two regions
    /// (one-dimensional measure; the normalization integrals are N = 1).
    pub fn for_region(
        mu: f64,
        theta: f64,
        region: SupportRegion,
        phi0: f64,
    ) -> Result<Self, ClosedFormError> {
        region.check(mu, theta)?;
        if !(phi0 > 0.0) {
            return Err(ClosedFormError::Admissibility {
                reason: format!("phi(0) = {phi0} must be positive"),
            });
        }
        let (alpha_s, beta_s, nu_s) = scaled_exponents(mu, theta)?;
        let amplitude = norm_amplitude(mu, theta, region)?;
        // 𝒜^{ν-1} = -k Γ(-β)/Γ(α+1)  ⇒  k = -𝒜^{ν-1} Γ(α+1)/Γ(-β)
        let k_const = -amplitude.powf(nu_s - 1.0) * gamma_fn(alpha_s + 1.0)?.value
            / gamma_fn(-beta_s)?.value;
        let xi = nu_s - 1.0 + theta + mu; // N = 1
        if xi == 0.0 {
            return Err(ClosedFormError::DegenerateDenominator { what: "ξ".into() });
        }
        Ok(Self {
            alpha_s,
            beta_s,
            nu_s,
            b_sign: region.b_sign(),
            amplitude,
            k_const,
            xi,
            phi0,
            mu,
            theta,
            region,
        })
    }

    /// Internal-consistency check of the stored exponents against their
    /// defining formulas (used by tests and deserializers).
    pub fn verify_invariants(&self) -> Result<(), ClosedFormError> {
        let (a, b, n) = scaled_exponents(self.mu, self.theta)?;
        let ok = (a - self.alpha_s).abs() < 1e-12
            && (b - self.beta_s).abs() < 1e-12
            && (n - self.nu_s).abs() < 1e-12
            && (self.xi - (self.nu_s - 1.0 + self.theta + self.mu)).abs() < 1e-12
            && self.amplitude > 0.0;
        if ok {
            Ok(())
        } else {
            Err(ClosedFormError::Admissibility {
                reason: "scaled-solution spec violates its exponent identities".into(),
            })
        }
    }
}

/// Scale factor φ(t) from the Bernoulli-reduced ansatz ODE.
pub fn phi_scale(t: f64, spec: &ScaledSolutionSpec, p: &ModelParams) -> Result<f64, ClosedFormError> {
    if t < 0.0 {
        return Err(ClosedFormError::Admissibility {
            reason: format!("t = {t} must be nonnegative"),
        });
    }
    let xi = spec.xi;
    let kd = p.k_drift;
    let d = p.d_coeff;
    let u = if kd == 0.0 {
        spec.phi0.powf(xi) + xi * spec.k_const * d * t
    } else {
        let decay = (-xi * kd * t).exp();
        spec.phi0.powf(xi) * decay + d * spec.k_const / kd * (1.0 - decay)
    };
    if !(u > 0.0) {
        return Err(ClosedFormError::PhiDomain { t, u });
    }
    Ok(u.powf(1.0 / xi))
}

/// The similarity density ρ(x, t); zero outside |z| ≤ 1 in the
/// bounded-support region.
pub fn scaled_solution(
    x: f64,
    t: f64,
    spec: &ScaledSolutionSpec,
    p: &ModelParams,
) -> Result<Eval, ClosedFormError> {
    spec.verify_invariants()?;
    if p.n_dim != 1 {
        return Err(ClosedFormError::Admissibility {
            reason: "similarity normalization is built on the N = 1 measure".into(),
        });
    }
    let phi = phi_scale(t, spec, p)?;
    let z = x.abs() / phi;
    let d1 = 1.0 - 2.0 * spec.mu - spec.theta;
    let e_z = (spec.mu + spec.theta) * (1.0 + spec.mu + spec.theta) / d1;
    let e_b = (1.0 - spec.mu) * (1.0 + spec.mu + spec.theta) / d1;
    match spec.region {
        SupportRegion::BoundedSupport => {
            if z >= 1.0 {
                return Ok(Eval::new(0.0, 0.0));
            }
            let base = 1.0 - z;
            if base <= 0.0 {
                return Ok(Eval::new(0.0, 0.0));
            }
            let v = spec.amplitude / phi * z.powf(e_z) * base.powf(-e_b);
            Ok(Eval::new(v, v.abs() * 1e-13))
        }
        SupportRegion::InfiniteSupport => {
            let base = 1.0 + z;
            let v = spec.amplitude / phi * z.powf(e_z) * base.powf(-e_b);
            Ok(Eval::new(v, v.abs() * 1e-13))
        }
    }
}

/// Tsallis entropic index implied by the tail of the similarity solution:
/// q = (3+μ+θ)/(1+μ+θ).
pub fn tsallis_q(mu: f64, theta: f64) -> Result<f64, ClosedFormError> {
    let d = 1.0 + mu + theta;
    if d == 0.0 {
        return Err(ClosedFormError::DegenerateDenominator {
            what: "1 + μ + θ".into(),
        });
    }
    Ok((3.0 + mu + theta) / d)
}

/// Tail exponent 2/(q-1) = 1+μ+θ of the matching q-exponential.
pub fn tsallis_tail_exponent(mu: f64, theta: f64) -> Result<f64, ClosedFormError> {
    let q = tsallis_q(mu, theta)?;
    Ok(2.0 / (q - 1.0))
}
