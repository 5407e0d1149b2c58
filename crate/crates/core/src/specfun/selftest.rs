//! Numerical self-check of the Mittag-Leffler Laplace pair.

use super::mittag_leffler::ml3;
use super::quad::integrate;
use super::series::SeriesControl;
use crate::error::{check_positive, Error, Result};
use crate::report::ComparisonReport;

/// Compares ∫₀^∞ e^{−zt} t^{β−1} E^γ_{α,β}(c t^α) dt, computed by adaptive
/// quadrature, with the closed form z^{αγ−β}(z^α − c)^{−γ}.
pub fn ml_laplace_selftest(
    alpha: f64,
    beta: f64,
    gamma: f64,
    c: f64,
    z: f64,
    ctrl: &SeriesControl,
) -> Result<ComparisonReport> {
    check_positive("alpha", alpha)?;
    check_positive("beta", beta)?;
    check_positive("z", z)?;
    let r = c * z.powf(-alpha);
    if r >= 1.0 || r.abs() > 1.0 {
        return Err(Error::invalid("ml_laplace_selftest needs |c z^-alpha| < 1"));
    }
    let rhs = z.powf(alpha * gamma - beta) * (z.powf(alpha) - c).powf(-gamma);
    let f = |t: f64| -> Result<f64> {
        if t == 0.0 {
            return Ok(0.0);
        }
        // Errors in E are damped by e^{−zt}.
        let local = SeriesControl {
            abs_floor: ctrl.abs_floor.max(1e-12 * (z * t).exp()),
            ..*ctrl
        };
        let m = ml3(alpha, beta, gamma, c * t.powf(alpha), &local)?;
        Ok((-z * t).exp() * t.powf(beta - 1.0) * m)
    };
    // Integrate panel by panel until a panel adds less than 1e-7 of the
    // running total and the panel contributions are shrinking.
    let width = 1.0 / z;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut prev = f64::INFINITY;
    let mut t0 = 0.0;
    let mut done = false;
    for _ in 0..1000 {
        let q = integrate(f, t0, t0 + width, 1e-15, 1e-12)?;
        total += q.value;
        err += q.error;
        t0 += width;
        let piece = q.value.abs();
        if piece < 1e-7 * total.abs() && piece < prev {
            let r = piece / prev;
            total += q.value * r / (1.0 - r);
            done = true;
            break;
        }
        prev = piece;
    }
    if !done {
        return Err(Error::Quadrature {
            op: "ml_laplace_selftest",
            estimate: prev,
        });
    }
    let q = crate::specfun::quad::QuadResult {
        value: total,
        error: err,
        evaluations: 0,
    };
    let gap = (q.value - rhs).abs();
    Ok(ComparisonReport::upper("ml_laplace", "abs_gap", gap, 1e-6)
        .detail("alpha", alpha)
        .detail("beta", beta)
        .detail("gamma", gamma)
        .detail("c", c)
        .detail("z", z)
        .detail("quadrature", q.value)
        .detail("closed_form", rhs)
        .detail("quadrature_error", q.error)
        .detail("upper_limit", t0))
}

/// The ten (α, β, γ, c, z) points used by the acceptance sweep.
pub const LAPLACE_SWEEP: [(f64, f64, f64, f64, f64); 10] = [
    (1.0, 1.0, 1.0, -1.0, 1.0),
    (0.5, 1.0, 1.0, -1.0, 2.0),
    (0.8, 1.0, 2.0, -0.5, 1.5),
    (0.6, 1.0, 1.0, 0.5, 2.0),
    (0.7, 0.7, 1.0, -0.8, 2.5),
    (0.9, 1.5, 0.5, 0.7, 1.2),
    (0.3, 1.0, 1.0, -0.2, 3.0),
    (0.5, 0.5, 2.0, 0.3, 1.0),
    (0.75, 2.0, 1.5, -1.0, 3.0),
    (1.2, 1.0, 1.0, -0.5, 1.0),
];

/// Runs the sweep and folds the results into one report.
pub fn ml_laplace_sweep(ctrl: &SeriesControl) -> Result<ComparisonReport> {
    let parts = LAPLACE_SWEEP
        .iter()
        .map(|&(a, b, g, c, z)| ml_laplace_selftest(a, b, g, c, z, ctrl))
        .collect::<Result<Vec<_>>>()?;
    let worst = parts.iter().map(|p| p.value).fold(0.0, f64::max);
    let mut r = ComparisonReport::upper("ml_laplace_sweep", "max_abs_gap", worst, 1e-6);
    r.passed = parts.iter().all(|p| p.passed);
    r.insert("points", &parts);
    Ok(r.with_n(parts.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_case_is_one_half() {
        let r = ml_laplace_selftest(1.0, 1.0, 1.0, -1.0, 1.0, &SeriesControl::default()).unwrap();
        assert!((r.details["closed_form"].as_f64().unwrap() - 0.5).abs() < 1e-15);
        assert!(r.passed, "{}", r.summary());
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(ml_laplace_selftest(0.5, 1.0, 1.0, 2.0, 1.0, &SeriesControl::default()).is_err());
    }
}
