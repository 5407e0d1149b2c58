//! Three-parameter Mittag-Leffler function.

use super::gamma::{ln_gamma_signed, rgamma};
use super::series::{sum_series, SeriesControl, SeriesSum, Term};
use crate::error::{check_finite, check_positive, Result};

/// E^γ_{α,β}(x) = Σ_k (γ)_k x^k / (Γ(αk+β) k!).
///
/// Fails with [`crate::Error::Cancellation`] when alternating terms lose
/// too many digits for the result to be trusted.
pub fn ml3(alpha: f64, beta: f64, gamma: f64, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    ml3_detailed(alpha, beta, gamma, x, ctrl).map(|s| s.value)
}

/// Two-parameter form E_{α,β}(x).
pub fn ml2(alpha: f64, beta: f64, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    ml3(alpha, beta, 1.0, x, ctrl)
}

/// One-parameter form E_α(x).
pub fn ml1(alpha: f64, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    ml3(alpha, 1.0, 1.0, x, ctrl)
}

pub fn ml3_detailed(
    alpha: f64,
    beta: f64,
    gamma: f64,
    x: f64,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    check_positive("alpha", alpha)?;
    check_finite("beta", beta)?;
    check_finite("gamma", gamma)?;
    check_finite("x", x)?;
    if x == 0.0 || gamma == 0.0 {
        return Ok(SeriesSum {
            value: rgamma(beta),
            terms: 1,
            error: 0.0,
            max_term: rgamma(beta).abs(),
        });
    }
    let lx = x.abs().ln();
    let sx = x.signum();
    let mut log_rf = 0.0;
    let mut sign_rf = 1.0;
    let mut log_fact = 0.0;
    sum_series("ml3", ctrl, |k| {
        if k > 0 {
            let f = gamma + k as f64 - 1.0;
            if f == 0.0 {
                return Ok(Term::End);
            }
            log_rf += f.abs().ln();
            sign_rf *= f.signum();
            log_fact += (k as f64).ln();
        }
        let (lg, sg) = ln_gamma_signed(alpha * k as f64 + beta);
        if sg == 0.0 {
            return Ok(Term::Zero);
        }
        let kx = k as f64 * lx;
        let sign = sign_rf * sg * if k % 2 == 1 { sx } else { 1.0 };
        let scale = log_rf.abs() + kx.abs() + lg.abs() + log_fact;
        Ok(Term::from_log(sign, log_rf + kx - lg - log_fact, scale))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn reduces_to_exponential() {
        for &x in &[-3.0, -0.5, 0.0, 0.7, 5.0] {
            let v = ml1(1.0, x, &c()).unwrap();
            assert!((v - f64::exp(x)).abs() <= 1e-14 * f64::exp(x).max(1.0));
        }
    }

    #[test]
    fn cosh_at_alpha_two() {
        let v = ml1(2.0, 4.0, &c()).unwrap();
        assert!((v - 2.0f64.cosh()).abs() < 1e-14 * 2.0f64.cosh());
    }

    #[test]
    fn gamma_zero_gives_reciprocal_gamma() {
        let v = ml3(0.5, 2.5, 0.0, 3.0, &c()).unwrap();
        assert!((v - rgamma(2.5)).abs() < 1e-16);
    }

    #[test]
    fn negative_integer_gamma_terminates() {
        // (−1)_k vanishes for k ≥ 2.
        let v = ml3(1.0, 1.0, -1.0, 2.0, &c()).unwrap();
        assert!((v - (1.0 - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn large_negative_argument_refused() {
        assert!(ml1(0.6, -30.0, &c()).is_err());
    }
}
