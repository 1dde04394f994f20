//! Mixed space-time fractional case with linear drift: N = 1, ν = 1,
//! θ = 0, F(x) = -𝒦x, Riesz order μ, Caputo order γ, and a power-law (or
//! impulsive) memory kernel.
//!
//! In Fourier–Laplace space the solution is the series
//!
//! ρ̂(k, s) = Σ_n (1/n!) W^n e^{-W} s^{γ-1}/(s^γ + nμ𝒦),  W = D̃(s)|k|^μ/(𝒦μ),
//!
//! whose term-wise Laplace inversion yields, for the power-law kernel,
//!
//! ρ̂(k, t) = Σ_n (1/n!) ∫₀^t dt'/t'
//!             H^{1,0}_{1,1}[ c t'^α | (0,-α); (n,1) ] E_{γ,1}(-nμ𝒦(t-t')^γ),
//!
//! c = D|k|^μ/(𝒦μ). The Mittag-Leffler subscript is γ (the transform
//! pair s^{γ-1}/(s^γ + λ) ↔ E_γ(-λ t^γ) admits no other reading), and
//! the n = 0 inversion carries a unit δ(t') atom — the constant term of
//! e^{-c s^{-α}} — which the H-series drops because 1/Γ(0) = 0; absorbing
//! it turns the n = 0 term into the Wright-type function
//! Σ_ν (-c t^α)^ν/(ν! Γ(αν+1)), and restores ρ̂(0, t) = 1.
//!
//! Fourier inversion of the H factor gives the real-space terms
//!
//! F^{-1}{H^{1,0}_{1,1}[c t'^α]} = (1/(μ√π|x|))
//!     H^{1,1}_{2,2}[ (|x|/2)(𝒦μ/(D t'^α))^{1/μ} | (1-n,1/μ), (0,α/μ);
//!                                                  (1/2,1/2), (1,1/2) ].
//!
//! The 1/t' endpoint of every time integral is regularized by the
//! substitution t' = e^u (the H factor decays like t'^{αn} there).

use crate::closed_form::{ClosedFormError, KernelKind, ModelParams};
use crate::oracle::adaptive_quad;
use crate::specfun::{fox_h, fox_h_with_tol, mittag_leffler, HParams};
use crate::Eval;
use std::cell::RefCell;
use std::f64::consts::PI;

/// Default truncation budget for the n-series.
pub const MIXED_MAX_TERMS: usize = 200;

/// Relative tail bound at which the n-series stops.
const TAIL_CUTOFF: f64 = 1e-12;

fn mixed_checks(p: &ModelParams, t: f64) -> Result<f64, ClosedFormError> {
    p.validate()?;
    if p.n_dim != 1 || p.nu != 1.0 || p.theta != 0.0 {
        return Err(ClosedFormError::Admissibility {
            reason: "mixed case requires N = 1, nu = 1, theta = 0".into(),
        });
    }
    if !(p.k_drift > 0.0) {
        return Err(ClosedFormError::Admissibility {
            reason: format!("drift amplitude {} must be positive", p.k_drift),
        });
    }
    if !(p.mu > 0.0 && p.mu <= 2.0) {
        return Err(ClosedFormError::Admissibility {
            reason: format!("mu = {} outside (0, 2]", p.mu),
        });
    }
    if !(t > 0.0) {
        return Err(ClosedFormError::Admissibility {
            reason: format!("t = {t} must be positive"),
        });
    }
    let alpha = match p.kernel {
        KernelKind::Impulsive => 0.0,
        KernelKind::PowerLaw => {
            if !(p.alpha_mem > 0.0 && p.alpha_mem < 1.0) {
                return Err(ClosedFormError::Admissibility {
                    reason: format!("alpha_mem = {} outside (0, 1)", p.alpha_mem),
                });
            }
            p.alpha_mem
        }
    };
    Ok(alpha)
}

/// Mittag-Leffler relaxation factor E_{γ,1}(-nμ𝒦 τ^γ).
fn relax_factor(n: usize, tau: f64, p: &ModelParams) -> Result<Eval, ClosedFormError> {
    if n == 0 {
        return Ok(Eval::exact(1.0));
    }
    let arg = -(n as f64) * p.mu * p.k_drift * tau.powf(p.gamma);
    Ok(mittag_leffler(p.gamma, 1.0, arg)?)
}

/// Characteristic function ρ̂(k, t) of the mixed case, truncated at
/// `budget` terms of the n-series.
pub fn mixed_charfn(k: f64, t: f64, p: &ModelParams, budget: usize) -> Result<Eval, ClosedFormError> {
    let alpha = mixed_checks(p, t)?;
    if budget == 0 {
        return Err(ClosedFormError::Admissibility {
            reason: "truncation budget must be at least 1".into(),
        });
    }
    if k == 0.0 {
        return Ok(Eval::exact(1.0));
    }
    let c = p.d_coeff * k.abs().powf(p.mu) / (p.k_drift * p.mu);

    if alpha == 0.0 {
        // Impulsive kernel: the time dependence is pure Mittag-Leffler.
        let mut sum = 0.0;
        let mut err = 0.0;
        let mut coef = (-c).exp(); // (1/n!) c^n e^{-c}
        for n in 0..budget {
            let e = relax_factor(n, t, p)?;
            let term = coef * e.value;
            sum += term;
            err += coef * e.err;
            if coef < TAIL_CUTOFF * sum.abs().max(1e-300) && n > 2 {
                return Ok(Eval::new(sum, err + coef));
            }
            coef *= c / (n as f64 + 1.0);
        }
        return Err(ClosedFormError::TruncationBudget {
            budget,
            tail: coef,
        });
    }

    // Power-law kernel. n = 0: Wright-type closed form (δ-atom included).
    let wright0 = HParams::new(1, 0, vec![(1.0, -alpha)], vec![(0.0, 1.0)])?;
    let term0 = fox_h(&wright0, c * t.powf(alpha))?;
    let mut sum = term0.value;
    let mut err = term0.err;
    let mut small_streak = 0usize;

    let ln_t = t.ln();
    let z_end = c * t.powf(alpha);
    for n in 1..budget {
        let hn = HParams::new(1, 0, vec![(0.0, -alpha)], vec![(n as f64, 1.0)])?;
        // The Wright factor peaks near argument ~ n; below the peak it
        // falls off like z^n. Cover the peak, then 45 e-folds of decay.
        let drop_to_bump = (z_end / n as f64).max(1.0).ln() / alpha;
        let u_min = ln_t - drop_to_bump - 45.0 / (alpha * n as f64);
        let inner_err: RefCell<Option<ClosedFormError>> = RefCell::new(None);
        let h_of_tp = |tp: f64| -> f64 {
            match fox_h_with_tol(&hn, c * tp.powf(alpha), 1e-10) {
                Ok(v) => v.value,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e.into());
                    0.0
                }
            }
        };
        let relax = |tau: f64| -> f64 {
            match relax_factor(n, tau, p) {
                Ok(v) => v.value,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let fact: f64 = (1..=n).fold(1.0, |a, j| a * j as f64);
        let inv_fact = 1.0 / fact;
        let t_mid = 0.7 * t;
        let integrand_u = |u: f64| -> f64 {
            let tp = u.exp();
            inv_fact * h_of_tp(tp) * relax(t - tp)
        };
        let (bulk, qerr1) = adaptive_quad(&integrand_u, u_min, t_mid.ln(), 1e-11)?;
        let g_exp = p.gamma;
        let w_max = (t - t_mid).powf(g_exp);
        let integrand_w = |w: f64| -> f64 {
            if w <= 0.0 {
                return 0.0;
            }
            let tau = w.powf(1.0 / g_exp);
            let tp = t - tau;
            inv_fact * h_of_tp(tp) * relax(tau) / tp * tau / (g_exp * w)
        };
        let (layer, qerr2) = adaptive_quad(&integrand_w, 0.0, w_max, 1e-11)?;
        let term = bulk + layer;
        let qerr = qerr1 + qerr2;
        if let Some(e) = inner_err.into_inner() {
            return Err(e);
        }
        sum += term;
        err += qerr;
        if term.abs() < TAIL_CUTOFF * sum.abs().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 && n > 2 {
                return Ok(Eval::new(sum, err + term.abs()));
            }
        } else {
            small_streak = 0;
        }
        if n + 1 == budget {
            let tail = term.abs();
            if tail > 1e-9 * sum.abs().max(1e-12) {
                return Err(ClosedFormError::TruncationBudget { budget, tail });
            }
            return Ok(Eval::new(sum, err + tail));
        }
    }
    Ok(Eval::new(sum, err))
}

/// Real-space density ρ(x, t) of the mixed case for x ≠ 0.
pub fn mixed_density(x: f64, t: f64, p: &ModelParams, budget: usize) -> Result<Eval, ClosedFormError> {
    let alpha = mixed_checks(p, t)?;
    if x == 0.0 {
        return Err(ClosedFormError::SingularPoint {
            what: "mixed_density carries 1/|x|; evaluate at x ≠ 0".into(),
        });
    }
    if budget == 0 {
        return Err(ClosedFormError::Admissibility {
            reason: "truncation budget must be at least 1".into(),
        });
    }
    let mu = p.mu;
    let pref = 1.0 / (mu * PI.sqrt() * x.abs());
    // y(t') = (|x|/2) (𝒦μ/(D t'^α))^{1/μ}
    let y_base = x.abs() / 2.0 * (p.k_drift * mu / p.d_coeff).powf(1.0 / mu);

    if alpha == 0.0 {
        // Impulsive kernel: no time integral; the H factor loses its
        // (0, α/μ) pair.
        let mut sum = 0.0;
        let mut err = 0.0;
        let mut fact = 1.0;
        let mut last_rel = f64::INFINITY;
        for n in 0..budget {
            if n > 0 {
                fact *= n as f64;
            }
            let hp = HParams::new(
                1,
                1,
                vec![(1.0 - n as f64, 1.0 / mu)],
                vec![(0.5, 0.5), (1.0, 0.5)],
            )?;
            let h = fox_h(&hp, y_base)?;
            let e = relax_factor(n, t, p)?;
            let term = h.value * e.value / fact;
            sum += term;
            err += (h.err * e.value.abs() + e.err * h.value.abs()) / fact;
            last_rel = term.abs();
            if last_rel < TAIL_CUTOFF * sum.abs().max(1e-300) && n > 2 {
                return Ok(Eval::new(pref * sum, pref * (err + last_rel)));
            }
        }
        let tail = last_rel;
        if tail > 1e-9 * sum.abs().max(1e-12) {
            return Err(ClosedFormError::TruncationBudget { budget, tail });
        }
        return Ok(Eval::new(pref * sum, pref * (err + tail)));
    }

    let ln_t = t.ln();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut fact = 1.0;
    let mut last = f64::INFINITY;
    let mut small_streak = 0usize;
    for n in 0..budget {
        if n > 0 {
            fact *= n as f64;
        }
        let hp = HParams::new(
            1,
            1,
            vec![(1.0 - n as f64, 1.0 / mu), (0.0, alpha / mu)],
            vec![(0.5, 0.5), (1.0, 0.5)],
        )?;
        // y(t') grows as t' → 0 and H²²ₙ(y) peaks near y ~ (n+1)^{1/μ};
        // run the window past the peak plus 45 e-folds of the y^{-μ(n∨1)}
        // descent.
        let y_at_t = y_base * t.powf(-alpha / mu);
        let bump = 4.0 * ((n.max(1)) as f64).powf(1.0 / mu);
        let drop_to_bump = (mu / alpha) * (bump / y_at_t).max(1.0).ln();
        let u_min = ln_t - drop_to_bump - 45.0 / (alpha * (n.max(1)) as f64);
        let inner_err: RefCell<Option<ClosedFormError>> = RefCell::new(None);
        let h_of_tp = |tp: f64| -> f64 {
            let y = y_base * tp.powf(-alpha / mu);
            match fox_h_with_tol(&hp, y, 1e-9) {
                Ok(v) => v.value,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e.into());
                    0.0
                }
            }
        };
        let relax = |tau: f64| -> f64 {
            match relax_factor(n, tau, p) {
                Ok(v) => v.value,
                Err(e) => {
                    inner_err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        // Bulk in u = ln t'; endpoint layer in w = (t-t')^γ where the
        // Mittag-Leffler factor is smooth (it has a t'^γ Hölder kink at
        // t' = t that stalls plain panels).
        // 1/n! rides inside the integrand: the H factor alone grows like
        // (n-1)! near its bump and would defeat any absolute tolerance.
        let inv_fact = 1.0 / fact;
        let t_mid = 0.7 * t;
        let integrand_u = |u: f64| -> f64 {
            let tp = u.exp();
            inv_fact * h_of_tp(tp) * relax(t - tp)
        };
        let (bulk, qerr1) = adaptive_quad(&integrand_u, u_min, t_mid.ln(), 1e-9)?;
        let g_exp = p.gamma;
        let w_max = (t - t_mid).powf(g_exp);
        let integrand_w = |w: f64| -> f64 {
            if w <= 0.0 {
                return 0.0;
            }
            let tau = w.powf(1.0 / g_exp);
            let tp = t - tau;
            inv_fact * h_of_tp(tp) * relax(tau) / tp * tau / (g_exp * w)
        };
        let (layer, qerr2) = adaptive_quad(&integrand_w, 0.0, w_max, 1e-9)?;
        let term = bulk + layer;
        let qerr = qerr1 + qerr2;
        if let Some(e) = inner_err.into_inner() {
            return Err(e);
        }
        sum += term;
        err += qerr;
        last = term.abs();
        if last < TAIL_CUTOFF * sum.abs().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 && n > 2 {
                return Ok(Eval::new(pref * sum, pref * (err + last)));
            }
        } else {
            small_streak = 0;
        }
    }
    if last > 1e-8 * sum.abs().max(1e-12) {
        return Err(ClosedFormError::TruncationBudget { budget, tail: last });
    }
    Ok(Eval::new(pref * sum, pref * (err + last)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_params() -> ModelParams {
        ModelParams {
            gamma: 0.5,
            mu: 1.5,
            nu: 1.0,
            theta: 0.0,
            n_dim: 1,
            d_coeff: 1.0,
            k_drift: 1.0,
            alpha_mem: 0.5,
            kernel: KernelKind::PowerLaw,
        }
    }

    #[test]
    fn zero_wavenumber_is_exactly_one() {
        let p = mixed_params();
        let v = mixed_charfn(0.0, 1.0, &p, MIXED_MAX_TERMS).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn charfn_bounded_by_one() {
        let p = mixed_params();
        for &k in &[0.2, 0.7, 1.5, 3.0, 6.0] {
            let v = mixed_charfn(k, 0.8, &p, MIXED_MAX_TERMS).unwrap().value;
            assert!(v.abs() <= 1.0 + 1e-9, "k={k}: {v}");
        }
    }

    #[test]
    fn impulsive_kernel_stationary_limit() {
        // α = 0, 𝒦 large, t large: ρ̂ → e^{-D|k|^μ/(𝒦μ)} (only n = 0 survives).
        let mut p = mixed_params();
        p.kernel = KernelKind::Impulsive;
        p.k_drift = 4.0;
        let k = 1.3;
        let v = mixed_charfn(k, 50.0, &p, MIXED_MAX_TERMS).unwrap().value;
        let expect = (-p.d_coeff * k.powf(p.mu) / (p.k_drift * p.mu)).exp();
        assert!((v - expect).abs() < 1e-6, "{v} vs {expect}");
    }

    #[test]
    fn density_is_symmetric() {
        let p = mixed_params();
        let a = mixed_density(0.8, 1.0, &p, 60).unwrap().value;
        let b = mixed_density(-0.8, 1.0, &p, 60).unwrap().value;
        assert_eq!(a, b);
        assert!(a > 0.0);
    }

    #[test]
    fn density_singular_origin_rejected() {
        let p = mixed_params();
        assert!(matches!(
            mixed_density(0.0, 1.0, &p, 60),
            Err(ClosedFormError::SingularPoint { .. })
        ));
    }

    #[test]
    fn invalid_parameters_rejected() {
        let mut p = mixed_params();
        p.theta = 0.5;
        assert!(mixed_charfn(1.0, 1.0, &p, 50).is_err());
        let mut p = mixed_params();
        p.k_drift = -1.0;
        assert!(mixed_charfn(1.0, 1.0, &p, 50).is_err());
        let p = mixed_params();
        assert!(mixed_charfn(1.0, 0.0, &p, 50).is_err());
        assert!(mixed_charfn(1.0, 1.0, &p, 0).is_err());
    }
}
