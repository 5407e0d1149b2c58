//! Compound fields with exponential and Mittag-Leffler marks.

use super::law::{CountFamily, CountLaw};
use super::params::FieldParams;
use crate::error::{check_nonneg, check_order, check_positive, Error, Result};
use crate::specfun::gamma::{ln_factorial, poisson_pmf};
use crate::specfun::mittag_leffler::ml3;
use crate::specfun::mwright::InverseStableLaw;
use crate::specfun::quad::{integrate, integrate_to_inf};
use crate::specfun::series::{ksum, SeriesControl};

/// Distribution function split into its atom at zero and its absolutely
/// continuous part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfParts {
    pub atom: f64,
    pub continuous: f64,
}

impl CdfParts {
    pub fn value(&self) -> f64 {
        self.atom + self.continuous
    }
}

fn erlang_pdf(n: usize, sigma: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return if n == 1 { sigma } else { 0.0 };
    }
    let nf = n as f64;
    (nf * sigma.ln() + (nf - 1.0) * y.ln() - sigma * y - ln_factorial(n as u64 - 1)).exp()
}

/// Count pmf of the time-fractional field used as the compounding count.
/// With one order equal to 1 it is x^n E^{n+1}_{α,αn+1}(−x).
fn compound_counts(
    t1: f64,
    t2: f64,
    params: &FieldParams,
    ctrl: &SeriesControl,
) -> Result<Vec<f64>> {
    let p = FieldParams {
        beta: 1.0,
        ..*params
    };
    let x = p.lambda * p.time_scale(t1, t2);
    let n_max = super::law::support_cutoff(CountFamily::Tfprf, t1, t2, &p, 1e-14)?;
    if p.alpha1 == 1.0 && p.alpha2 == 1.0 {
        return Ok((0..=n_max as u64).map(|n| poisson_pmf(n, x)).collect());
    }
    if p.alpha1 == 1.0 || p.alpha2 == 1.0 {
        let a = p.alpha1.min(p.alpha2);
        let ml: Result<Vec<f64>> = (0..=n_max)
            .map(|n| {
                let nf = n as f64;
                let e = ml3(a, a * nf + 1.0, nf + 1.0, -x, ctrl)?;
                Ok(x.powi(n as i32) * e)
            })
            .collect();
        if let Ok(v) = ml {
            return Ok(v);
        }
    }
    Ok(CountLaw::compute(CountFamily::Tfprf, t1, t2, &p, n_max, ctrl)?.pmf)
}

/// Density of the absolutely continuous part of the exponential compound
/// field at (t1, t2), with the count pmf computed once.
#[derive(Debug, Clone)]
pub struct ExpCompound {
    pmf: Vec<f64>,
    sigma: f64,
}

impl ExpCompound {
    pub fn new(
        t1: f64,
        t2: f64,
        params: &FieldParams,
        sigma: f64,
        ctrl: &SeriesControl,
    ) -> Result<Self> {
        params.validate()?;
        check_positive("sigma", sigma)?;
        check_nonneg("t1", t1)?;
        check_nonneg("t2", t2)?;
        Ok(ExpCompound {
            pmf: compound_counts(t1, t2, params, ctrl)?,
            sigma,
        })
    }

    /// Pr{no points}, the atom at zero.
    pub fn atom(&self) -> f64 {
        self.pmf[0]
    }

    /// Σ_{n≥1} p(n) σ^n y^{n−1} e^{−σy}/(n−1)!.
    pub fn pdf(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        ksum(
            self.pmf
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, p)| p * erlang_pdf(n, self.sigma, y)),
        )
    }

    pub fn cdf(&self, y: f64) -> Result<CdfParts> {
        if y < 0.0 {
            return Ok(CdfParts {
                atom: 0.0,
                continuous: 0.0,
            });
        }
        let c = integrate(|v| Ok(self.pdf(v)), 0.0, y, 1e-14, 1e-12)?;
        Ok(CdfParts {
            atom: self.atom(),
            continuous: c.value,
        })
    }

    /// ∫₀^∞ f dy, which equals 1 − Pr{no points}.
    pub fn defect(&self) -> Result<f64> {
        Ok(integrate_to_inf(|v| Ok(self.pdf(v)), 0.0, 1e-14, 1e-12)?.value)
    }
}

/// Density of the exponential compound field,
/// (e^{−σy}/y) Σ_{n≥1} (xσy)^n/(n!(n−1)!) ψ_n with x = λ t1^α1 t2^α2.
pub fn cprf_exp_density(
    y: f64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    sigma: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    if y < 0.0 {
        return Ok(0.0);
    }
    Ok(ExpCompound::new(t1, t2, params, sigma, ctrl)?.pdf(y))
}

/// Distribution function of the exponential compound field.
pub fn cprf_exp_cdf(
    y: f64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    sigma: f64,
    ctrl: &SeriesControl,
) -> Result<CdfParts> {
    ExpCompound::new(t1, t2, params, sigma, ctrl)?.cdf(y)
}

/// Density of the sum of n i.i.d. Mittag-Leffler marks,
/// σ^n y^{βn−1} E^n_{β,βn}(−σy^β).
///
/// Where the series loses too many digits the density is computed from the
/// representation (Y_1 + ... + Y_n)^β = G/L with G ~ Gamma(n, σ) and L
/// inverse β-stable.
pub fn ml_nfold_density(
    y: f64,
    n: usize,
    sigma: f64,
    beta_c: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    check_positive("sigma", sigma)?;
    check_order("beta_c", beta_c)?;
    if n == 0 {
        return Err(Error::invalid("ml_nfold_density needs n >= 1"));
    }
    if y <= 0.0 {
        return Ok(0.0);
    }
    if beta_c == 1.0 {
        return Ok(erlang_pdf(n, sigma, y));
    }
    let nf = n as f64;
    let yb = y.powf(beta_c);
    match ml3(beta_c, beta_c * nf, nf, -sigma * yb, ctrl) {
        Ok(e) => Ok(sigma.powf(nf) * y.powf(beta_c * nf - 1.0) * e),
        Err(e) if e.is_numerical_limit() => ml_nfold_mixture(y, n, sigma, beta_c),
        Err(e) => Err(e),
    }
}

fn ml_nfold_mixture(y: f64, n: usize, sigma: f64, beta_c: f64) -> Result<f64> {
    let law = InverseStableLaw::new(beta_c)?;
    let yb = y.powf(beta_c);
    let jac = beta_c * y.powf(beta_c - 1.0);
    Ok(jac * law.expect(|l| l * erlang_pdf(n, sigma, yb * l)))
}

/// Density of the compound field with Mittag-Leffler marks of order
/// `beta_c`, counts from the time-fractional field with `params`.
#[derive(Debug, Clone)]
pub struct MlCompound {
    exp: ExpCompound,
    beta_c: f64,
}

impl MlCompound {
    pub fn new(
        t1: f64,
        t2: f64,
        params: &FieldParams,
        sigma: f64,
        beta_c: f64,
        ctrl: &SeriesControl,
    ) -> Result<Self> {
        check_order("beta_c", beta_c)?;
        Ok(MlCompound {
            exp: ExpCompound::new(t1, t2, params, sigma, ctrl)?,
            beta_c,
        })
    }

    pub fn atom(&self) -> f64 {
        self.exp.atom()
    }

    /// Σ_n p(n) × n-fold mark density, by series where each term is
    /// reliable.
    pub fn pdf(&self, y: f64, ctrl: &SeriesControl) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        if self.beta_c == 1.0 {
            return Ok(self.exp.pdf(y));
        }
        let terms: Result<Vec<f64>> = self
            .exp
            .pmf
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, p)| Ok(p * ml_nfold_density(y, n, self.exp.sigma, self.beta_c, ctrl)?))
            .collect();
        Ok(ksum(terms?))
    }

    /// Same density through β y^{β−1} E[L f_exp(y^β L)].
    pub fn pdf_subordinated(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            return Ok(0.0);
        }
        let law = InverseStableLaw::new(self.beta_c)?;
        let yb = y.powf(self.beta_c);
        Ok(self.beta_c * y.powf(self.beta_c - 1.0) * law.expect(|l| l * self.exp.pdf(yb * l)))
    }

    pub fn defect(&self, ctrl: &SeriesControl) -> Result<f64> {
        let head = integrate(|v| self.pdf(v, ctrl), 0.0, 1.0, 1e-13, 1e-11)?;
        // With y = s^{−2/β} the y^{−β−1} tail becomes an integrand that
        // vanishes linearly at s = 0.
        let b = self.beta_c;
        let tail = integrate(
            |s| {
                if s == 0.0 {
                    return Ok(0.0);
                }
                let y = s.powf(-2.0 / b);
                Ok(self.pdf(y, ctrl)? * (2.0 / b) * y / s)
            },
            0.0,
            1.0,
            1e-9,
            1e-8,
        )?;
        Ok(head.value + tail.value)
    }
}

/// Density of the Mittag-Leffler compound field; `params` supplies λ and the
/// time orders α1, α2 of the count.
pub fn cprf_ml_density(
    y: f64,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    sigma: f64,
    beta_c: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    MlCompound::new(t1, t2, params, sigma, beta_c, ctrl)?.pdf(y, ctrl)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_case_closed_form() {
        // (e^{−σy−λt1t2}/y) Σ (λσ t1 t2 y)^n/((n−1)! n!).
        let p = FieldParams::poisson(1.3).unwrap();
        let c = SeriesControl::default();
        let y = 0.9;
        let f = cprf_exp_density(y, 1.0, 1.0, &p, 0.8, &c).unwrap();
        let z: f64 = 1.3 * 0.8 * y;
        let s: f64 = (1..60)
            .map(|n| (n as f64 * z.ln() - ln_factorial(n - 1) - ln_factorial(n)).exp())
            .sum();
        let exact = (-0.8 * y - 1.3f64).exp() / y * s;
        assert!((f - exact).abs() < 1e-14);
    }

    #[test]
    fn nfold_series_and_mixture_agree() {
        let c = SeriesControl::default();
        for &(y, n, b) in &[(0.5, 1, 0.5), (1.2, 3, 0.6), (2.0, 2, 0.8)] {
            let s = ml_nfold_density(y, n, 1.0, b, &c).unwrap();
            let m = ml_nfold_mixture(y, n, 1.0, b).unwrap();
            assert!((s - m).abs() < 1e-11, "{s} {m}");
        }
    }

    #[test]
    fn erlang_reduction() {
        let c = SeriesControl::default();
        let f = ml_nfold_density(1.5, 3, 2.0, 1.0, &c).unwrap();
        let exact = 8.0 * 1.5f64.powi(2) * (-3.0f64).exp() / 2.0;
        assert!((f - exact).abs() < 1e-15);
    }
}
