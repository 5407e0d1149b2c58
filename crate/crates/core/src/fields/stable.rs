use super::rng::{exp1, open01, stream_rng};
use crate::error::{check_nonneg, check_order, Result};
use rand::Rng;
use std::f64::consts::PI;

/// ln of one draw of H_α(1), E e^{−uH} = e^{−u^α}, by Kanter's representation.
///
/// α = 1 gives ln 1 = 0.
pub fn ln_stable_draw<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 0.0;
    }
    let u = PI * open01(rng);
    let w = exp1(rng);
    let k = 1.0 / (1.0 - alpha);
    let ln_a = k * ((alpha * u).sin().ln() - u.sin().ln()) + ((1.0 - alpha) * u).sin().ln()
        - (alpha * u).sin().ln();
    (1.0 - alpha) / alpha * (ln_a - w.ln())
}

pub fn stable_draw<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    ln_stable_draw(alpha, rng).exp()
}

/// L_α(t) through L_α(t) = (t / H_α(1))^α.
pub fn inverse_stable_draw<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if alpha == 1.0 {
        return t;
    }
    (alpha * (t.ln() - ln_stable_draw(alpha, rng))).exp()
}

/// One draw of H_α(1) from stream 0 of `seed`.
pub fn sample_stable(alpha: f64, seed: u64) -> Result<f64> {
    check_order("alpha", alpha)?;
    Ok(stable_draw(alpha, &mut stream_rng(seed, 0)))
}

pub fn sample_inverse_stable(alpha: f64, t: f64, seed: u64) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_nonneg("t", t)?;
    Ok(inverse_stable_draw(alpha, t, &mut stream_rng(seed, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rng::replicate;

    #[test]
    fn degenerate_orders() {
        assert_eq!(sample_stable(1.0, 3).unwrap(), 1.0);
        assert_eq!(sample_inverse_stable(1.0, 2.5, 3).unwrap(), 2.5);
        assert_eq!(sample_inverse_stable(0.4, 0.0, 3).unwrap(), 0.0);
        assert!(sample_stable(0.0, 1).is_err());
        assert!(sample_stable(1.2, 1).is_err());
        assert!(sample_inverse_stable(0.5, -1.0, 1).is_err());
    }

    #[test]
    fn laplace_at_one() {
        let v = replicate(5, 100_000, |r| (-stable_draw(0.5, r)).exp());
        let m = v.iter().sum::<f64>() / v.len() as f64;
        assert!((m - (-1.0f64).exp()).abs() < 0.005, "{m}");
    }

    #[test]
    fn extreme_orders_stay_finite_in_log() {
        let v = replicate(9, 2000, |r| ln_stable_draw(0.05, r));
        assert!(v.iter().all(|x| !x.is_nan()));
        let l = replicate(9, 2000, |r| inverse_stable_draw(0.05, 1.0, r));
        assert!(l.iter().all(|x| x.is_finite() && *x >= 0.0));
    }
}
