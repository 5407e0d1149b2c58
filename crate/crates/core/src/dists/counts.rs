//! Series pmfs and transforms of the count fields.

use super::params::FieldParams;
use crate::error::{check_nonneg, check_order, check_positive, Result};
use crate::specfun::fracdiff::frac_binom_coeffs;
use crate::specfun::gamma::{ln_factorial, poisson_pmf};
use crate::specfun::series::{sum_series, SeriesControl, Term};
use crate::specfun::wright::{wright, WrightSpec};

fn axis_mass(n: u64) -> f64 {
    if n == 0 {
        1.0
    } else {
        0.0
    }
}

/// Term cap grown with the argument so slowly decaying series are not cut
/// short.
pub(crate) fn scaled_ctrl(ctrl: &SeriesControl, x: f64) -> SeriesControl {
    let mut c = *ctrl;
    c.max_terms = c.max_terms.max(10 * x.abs().ceil() as usize);
    c
}

/// Poisson random field: e^{−λt1t2}(λt1t2)^n/n!.
pub fn prf_pmf(n: u64, t1: f64, t2: f64, lambda: f64) -> f64 {
    poisson_pmf(n, lambda * t1 * t2)
}

/// Wright parameters of the TFPRF pmf at state n:
/// p(n) = x^n/n! · ₂Ψ₂[(n+1,1),(n+1,1);(nα1+1,α1),(nα2+1,α2) | −x].
pub fn fprf_wright_spec(n: u64, alpha1: f64, alpha2: f64) -> WrightSpec {
    let nf = n as f64;
    WrightSpec {
        upper: vec![(nf + 1.0, 1.0), (nf + 1.0, 1.0)],
        lower: vec![(nf * alpha1 + 1.0, alpha1), (nf * alpha2 + 1.0, alpha2)],
    }
}

/// Time-fractional Poisson random field pmf, by its alternating series.
///
/// The series converges for all arguments only when α1 + α2 > 1; outside
/// that range, and when cancellation eats the result, an error is returned.
/// [`super::CountLaw`] falls back to the subordination representation.
pub fn fprf_pmf(
    n: u64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    ctrl: &SeriesControl,
) -> Result<f64> {
    params.validate()?;
    check_nonneg("t1", t1)?;
    check_nonneg("t2", t2)?;
    let x = params.lambda * params.time_scale(t1, t2);
    if x == 0.0 {
        return Ok(axis_mass(n));
    }
    if params.alpha1 == 1.0 && params.alpha2 == 1.0 {
        return Ok(poisson_pmf(n, x));
    }
    let spec = fprf_wright_spec(n, params.alpha1, params.alpha2);
    let w = wright(&spec, -x, &scaled_ctrl(ctrl, x))?;
    Ok((n as f64 * x.ln() - ln_factorial(n)).exp() * w)
}

/// Laplace transform E e^{−uN} as the power series in x(e^{−u} − 1).
pub fn fprf_laplace(
    u: f64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    ctrl: &SeriesControl,
) -> Result<f64> {
    params.validate()?;
    check_nonneg("u", u)?;
    let x = params.lambda * params.time_scale(t1, t2);
    let z = x * ((-u).exp() - 1.0);
    if z == 0.0 {
        return Ok(1.0);
    }
    let spec = WrightSpec {
        upper: vec![(1.0, 1.0), (1.0, 1.0)],
        lower: vec![(1.0, params.alpha1), (1.0, params.alpha2)],
    };
    wright(&spec, z, &scaled_ctrl(ctrl, z))
}

/// Laplace transform in the ₂Ψ₂ form ₂Ψ₂[(1,1),(1,1);(1,α1),(1,α2) | −x(1 − e^{−u})].
pub fn tfprf_laplace(
    u: f64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    ctrl: &SeriesControl,
) -> Result<f64> {
    params.validate()?;
    check_nonneg("u", u)?;
    let x = params.lambda * params.time_scale(t1, t2);
    psi22(params.alpha1, params.alpha2, -x * (1.0 - (-u).exp()), ctrl)
}

/// ₂Ψ₂[(1,1),(1,1);(1,α1),(1,α2) | z] by its series.
pub fn psi22(alpha1: f64, alpha2: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    let spec = WrightSpec {
        upper: vec![(1.0, 1.0), (1.0, 1.0)],
        lower: vec![(1.0, alpha1), (1.0, alpha2)],
    };
    wright(&spec, z, &scaled_ctrl(ctrl, z))
}

/// Space-fractional Poisson random field pmf,
/// Σ_k (−1)^{n+k} (αk)_n x^k/(n! k!) with x = t1 t2 λ^α.
pub fn sfprf_pmf(
    n: u64,
    t1: f64,
    t2: f64,
    alpha: f64,
    lambda: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    check_nonneg("t1", t1)?;
    check_nonneg("t2", t2)?;
    let x = t1 * t2 * lambda.powf(alpha);
    if x == 0.0 {
        return Ok(axis_mass(n));
    }
    if alpha == 1.0 {
        return Ok(poisson_pmf(n, x));
    }
    sfprf_series("sfprf_pmf", n, x, alpha, 0.0, ctrl)
}

/// ∂/∂λ of [`sfprf_pmf`], differentiating the series term by term.
pub fn sfprf_pmf_dlambda(
    n: u64,
    t1: f64,
    t2: f64,
    alpha: f64,
    lambda: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    check_nonneg("t1", t1)?;
    check_nonneg("t2", t2)?;
    let x = t1 * t2 * lambda.powf(alpha);
    if x == 0.0 {
        return Ok(0.0);
    }
    // x^k carries λ^{αk}, so term k picks up αk/λ.
    let v = sfprf_series("sfprf_pmf_dlambda", n, x, alpha, 1.0, ctrl)?;
    Ok(alpha * v / lambda)
}

/// Σ_k (−1)^{n+k} k^m (αk)_n x^k/(n! k!) for m ∈ {0, 1}.
fn sfprf_series(
    op: &'static str,
    n: u64,
    x: f64,
    alpha: f64,
    m: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let lx = x.ln();
    let lnf = ln_factorial(n);
    let mut lkf = 0.0;
    let s = sum_series(op, &scaled_ctrl(ctrl, x), |k| {
        if k > 0 {
            lkf += (k as f64).ln();
        } else if m > 0.0 {
            return Ok(Term::Zero);
        }
        let ak = alpha * k as f64;
        let mut lff = if m > 0.0 { (k as f64).ln() } else { 0.0 };
        let mut sign = if (n + k as u64).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        for i in 0..n {
            let f = ak - i as f64;
            if f == 0.0 {
                return Ok(Term::Zero);
            }
            lff += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
        let kx = k as f64 * lx;
        Ok(Term::from_log(
            sign,
            lff + kx - lnf - lkf,
            lff.abs() + kx.abs() + lnf + lkf,
        ))
    })?;
    Ok(s.value)
}

/// pmf values p(0..=n_max) of the count with pgf exp(−x(1 − u)^α),
/// by the all-positive recurrence n a_n = Σ_k k g_k a_{n−k},
/// g_k = −x c_k ≥ 0.
pub fn sfprf_coefficients(n_max: usize, x: f64, alpha: f64) -> Vec<f64> {
    let mut a = vec![0.0; n_max + 1];
    a[0] = (-x).exp();
    if x == 0.0 {
        return a;
    }
    let c = frac_binom_coeffs(alpha, n_max);
    let kg: Vec<f64> = (0..=n_max).map(|k| -x * c[k] * k as f64).collect();
    for n in 1..=n_max {
        let mut s = 0.0;
        for k in 1..=n {
            s += kg[k] * a[n - k];
        }
        a[n] = s / n as f64;
    }
    a
}

/// pmf table of the SFPRF through [`sfprf_coefficients`].
pub fn sfprf_pmf_table(
    n_max: usize,
    t1: f64,
    t2: f64,
    alpha: f64,
    lambda: f64,
) -> Result<Vec<f64>> {
    check_order("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    check_nonneg("t1", t1)?;
    check_nonneg("t2", t2)?;
    Ok(sfprf_coefficients(
        n_max,
        t1 * t2 * lambda.powf(alpha),
        alpha,
    ))
}

/// pgf exp(−t1 t2 λ^α (1 − u)^α).
pub fn sfprf_pgf(u: f64, t1: f64, t2: f64, alpha: f64, lambda: f64) -> f64 {
    (-t1 * t2 * lambda.powf(alpha) * (1.0 - u).powf(alpha)).exp()
}

/// Wright parameters of the STFPRF pmf at state n:
/// p(n) = (−1)^n/n! · ₃Ψ₃[(1,β),(1,1),(1,1);(1−n,β),(1,α1),(1,α2) | −x].
pub fn stfprf_wright_spec(n: u64, params: &FieldParams) -> WrightSpec {
    WrightSpec {
        upper: vec![(1.0, params.beta), (1.0, 1.0), (1.0, 1.0)],
        lower: vec![
            (1.0 - n as f64, params.beta),
            (1.0, params.alpha1),
            (1.0, params.alpha2),
        ],
    }
}

/// Space-time fractional Poisson random field pmf by its ₃Ψ₃ series,
/// x = t1^α1 t2^α2 λ^β.
pub fn stfprf_pmf(
    n: u64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    ctrl: &SeriesControl,
) -> Result<f64> {
    params.validate()?;
    check_nonneg("t1", t1)?;
    check_nonneg("t2", t2)?;
    let x = params.time_scale(t1, t2) * params.lambda.powf(params.beta);
    if x == 0.0 {
        return Ok(axis_mass(n));
    }
    let spec = stfprf_wright_spec(n, params);
    let w = wright(&spec, -x, &scaled_ctrl(ctrl, x))?;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * (-ln_factorial(n)).exp() * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn prf_values() {
        assert!((prf_pmf(0, 1.0, 1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((prf_pmf(2, 2.0, 0.5, 3.0) - 0.224_041_807_655_388_2).abs() < 1e-15);
        assert_eq!(prf_pmf(0, 1.0, 0.0, 1.0), 1.0);
        assert_eq!(prf_pmf(3, 1.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn sfprf_series_matches_recurrence() {
        let tab = sfprf_pmf_table(12, 1.0, 1.5, 0.6, 1.3).unwrap();
        for (n, p) in tab.iter().enumerate() {
            let s = sfprf_pmf(n as u64, 1.0, 1.5, 0.6, 1.3, &c()).unwrap();
            assert!((s - p).abs() < 1e-13, "n={n}: {s} vs {p}");
        }
    }

    #[test]
    fn sfprf_p0_is_pgf_at_zero() {
        let p0 = sfprf_pmf(0, 1.2, 0.8, 0.4, 2.0, &c()).unwrap();
        assert!((p0 - sfprf_pgf(0.0, 1.2, 0.8, 0.4, 2.0)).abs() < 1e-15);
    }

    #[test]
    fn fprf_outside_convergence_fails_loudly() {
        let p = FieldParams::time_fractional(1.0, 0.3, 0.4).unwrap();
        assert!(fprf_pmf(0, 1.0, 1.0, &p, &c()).is_err());
    }
}
