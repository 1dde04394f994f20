//! Grünwald–Letnikov fractional differences on uniform grids.
//!
//! With lower terminal 0 the GL operator converges to the
//! Riemann–Liouville derivative, first order in the step:
//!
//! D^δ f(x_i) ≈ h^{-δ} Σ_{j=0}^{i} w_j f(x_{i-j}),
//! w_0 = 1,  w_j = w_{j-1} (j - 1 - δ)/j.

use crate::oracle::OracleError;

/// Binomial-ratio weights (-1)^j C(δ, j), any real δ.
pub fn gl_weights(order: f64, count: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(count);
    if count == 0 {
        return w;
    }
    w.push(1.0);
    for j in 1..count {
        let prev = w[j - 1];
        w.push(prev * ((j as f64 - 1.0 - order) / j as f64));
    }
    w
}

/// Fractional derivative of order δ ∈ (0, 2) of grid samples, lower
/// terminal at the first sample.
///
/// Returns one value per grid point; the left boundary uses the full
/// available history (the exact GL sum with terminal 0), so values very
/// close to the terminal carry the scheme's worst error. `samples` must
/// hold at least two points.
pub fn gl_frac_derivative(
    samples: &[f64],
    order: f64,
    h: f64,
) -> Result<Vec<f64>, OracleError> {
    if !(order > 0.0 && order < 2.0) {
        return Err(OracleError::InvalidArguments {
            reason: format!("GL order {order} outside (0, 2)"),
        });
    }
    if !(h > 0.0) {
        return Err(OracleError::InvalidArguments {
            reason: format!("step {h} must be positive"),
        });
    }
    if samples.len() < 2 {
        return Err(OracleError::InsufficientHistory { index: 0 });
    }
    let n = samples.len();
    let w = gl_weights(order, n);
    let scale = h.powf(-order);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += w[j] * samples[i - j];
        }
        out.push(scale * acc);
    }
    Ok(out)
}
