//! Fractional difference operators.

use super::gamma::gamma;
use crate::error::{check_order, check_positive, Error, Result};

/// Coefficients c_k of (1 − u)^α = Σ c_k u^k, for k = 0..=k_max.
pub fn frac_binom_coeffs(alpha: f64, k_max: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(k_max + 1);
    c.push(1.0);
    for k in 1..=k_max {
        let prev = c[k - 1];
        c.push(prev * (k as f64 - 1.0 - alpha) / k as f64);
    }
    c
}

/// L1 approximation of the Caputo derivative of order α ∈ (0, 1] at every
/// node of a uniform grid, starting from node 0.
///
/// For α < 1 the value at node 0 is 0. For α = 1 ordinary second-order
/// differences are returned (one-sided at the ends).
pub fn caputo_l1(samples: &[f64], alpha: f64, dt: f64) -> Result<Vec<f64>> {
    check_order("alpha", alpha)?;
    check_positive("dt", dt)?;
    let n = samples.len();
    if n < 2 {
        return Err(Error::invalid("caputo_l1 needs at least two samples"));
    }
    if alpha == 1.0 {
        return Ok(first_derivative(samples, dt));
    }
    let b: Vec<f64> = (0..n)
        .map(|j| {
            let j = j as f64;
            (j + 1.0).powf(1.0 - alpha) - j.powf(1.0 - alpha)
        })
        .collect();
    let scale = dt.powf(-alpha) / gamma(2.0 - alpha);
    let diffs: Vec<f64> = samples.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = vec![0.0; n];
    for (m, o) in out.iter_mut().enumerate().skip(1) {
        let mut s = 0.0;
        for j in 0..m {
            s += b[j] * diffs[m - j - 1];
        }
        *o = scale * s;
    }
    Ok(out)
}

fn first_derivative(f: &[f64], dt: f64) -> Vec<f64> {
    let n = f.len();
    if n == 2 {
        let d = (f[1] - f[0]) / dt;
        return vec![d, d];
    }
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (2.0 * dt);
    }
    out
}
