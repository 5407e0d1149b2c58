//! Family-level pmf tables with route selection and an overflow bin.

use super::counts::{fprf_pmf, psi22, sfprf_coefficients, sfprf_pmf, stfprf_pmf};
use super::mixture::{
    ml1_neg_mixture, psi22_neg_mixture, sfprf_tail, stfprf_pmf_mixture, stfprf_tail,
    tfprf_pmf_mixture, tfprf_tail,
};
use super::params::FieldParams;
use crate::error::{check_nonneg, Error, Result};
use crate::specfun::gamma::{poisson_pmf, poisson_upper_tail};
use crate::specfun::mittag_leffler::ml1;
use crate::specfun::series::SeriesControl;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountFamily {
    /// Poisson random field.
    Prf,
    /// Time-fractional field; uses alpha1, alpha2.
    Tfprf,
    /// Space-fractional field; uses beta as its order.
    Sfprf,
    /// Space-time fractional field; uses alpha1, alpha2, beta.
    Stfprf,
}

impl CountFamily {
    pub fn name(&self) -> &'static str {
        match self {
            CountFamily::Prf => "prf",
            CountFamily::Tfprf => "tfprf",
            CountFamily::Sfprf => "sfprf",
            CountFamily::Stfprf => "stfprf",
        }
    }

    /// Whether P(N > n) decays only polynomially.
    pub fn heavy_tailed(&self, params: &FieldParams) -> bool {
        matches!(self, CountFamily::Sfprf | CountFamily::Stfprf) && params.beta < 1.0
    }

    /// Scale of the count: the argument of the pmf series.
    pub fn scale(&self, t1: f64, t2: f64, p: &FieldParams) -> f64 {
        match self {
            CountFamily::Prf => p.lambda * t1 * t2,
            CountFamily::Tfprf => p.lambda * p.time_scale(t1, t2),
            CountFamily::Sfprf => t1 * t2 * p.lambda.powf(p.beta),
            CountFamily::Stfprf => p.time_scale(t1, t2) * p.lambda.powf(p.beta),
        }
    }
}

impl FromStr for CountFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "prf" => Ok(CountFamily::Prf),
            "tfprf" | "fprf" => Ok(CountFamily::Tfprf),
            "sfprf" => Ok(CountFamily::Sfprf),
            "stfprf" => Ok(CountFamily::Stfprf),
            _ => Err(Error::invalid(format!("unknown family '{s}'"))),
        }
    }
}

/// How a pmf table was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Closed,
    Series,
    Recurrence,
    Subordination,
}

/// pmf on {0..=n_max} plus the mass of {N > n_max}.
///
/// The overflow mass comes from a tail formula, not from 1 − Σ pmf, so
/// `sum() ≈ 1` is a genuine consistency check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountLaw {
    pub family: CountFamily,
    pub pmf: Vec<f64>,
    pub overflow: f64,
    pub route: Route,
}

impl CountLaw {
    pub fn compute(
        family: CountFamily,
        t1: f64,
        t2: f64,
        params: &FieldParams,
        n_max: usize,
        ctrl: &SeriesControl,
    ) -> Result<Self> {
        params.validate()?;
        check_nonneg("t1", t1)?;
        check_nonneg("t2", t2)?;
        let m = n_max as u64;
        let (pmf, route, overflow) = match family {
            CountFamily::Prf => {
                let mu = params.lambda * t1 * t2;
                let pmf = (0..=m).map(|n| poisson_pmf(n, mu)).collect();
                (pmf, Route::Closed, poisson_upper_tail(m, mu))
            }
            CountFamily::Tfprf => {
                let series: Result<Vec<f64>> =
                    (0..=m).map(|n| fprf_pmf(n, t1, t2, params, ctrl)).collect();
                let tail = tfprf_tail(m, t1, t2, params)?;
                match series {
                    Ok(p) => (p, Route::Series, tail),
                    Err(_) => (
                        tfprf_pmf_mixture(n_max, t1, t2, params)?,
                        Route::Subordination,
                        tail,
                    ),
                }
            }
            CountFamily::Sfprf => {
                let beta = params.beta;
                let series: Result<Vec<f64>> = (0..=m)
                    .map(|n| sfprf_pmf(n, t1, t2, beta, params.lambda, ctrl))
                    .collect();
                let x = t1 * t2 * params.lambda.powf(beta);
                let tail = sfprf_tail(m, x, beta)?;
                match series {
                    Ok(p) => (p, Route::Series, tail),
                    Err(_) => (sfprf_coefficients(n_max, x, beta), Route::Recurrence, tail),
                }
            }
            CountFamily::Stfprf => {
                let series: Result<Vec<f64>> = (0..=m)
                    .map(|n| stfprf_pmf(n, t1, t2, params, ctrl))
                    .collect();
                let tail = stfprf_tail(m, t1, t2, params)?;
                match series {
                    Ok(p) => (p, Route::Series, tail),
                    Err(_) => (
                        stfprf_pmf_mixture(n_max, t1, t2, params)?,
                        Route::Subordination,
                        tail,
                    ),
                }
            }
        };
        Ok(CountLaw {
            family,
            pmf,
            overflow,
            route,
        })
    }

    /// Chooses n_max for `tol`: for light tails the smallest n_max with
    /// overflow below tol/10; for heavy tails a support past the bulk, with
    /// the remaining mass in the overflow bin.
    pub fn auto(
        family: CountFamily,
        t1: f64,
        t2: f64,
        params: &FieldParams,
        tol: f64,
        ctrl: &SeriesControl,
    ) -> Result<Self> {
        let n_max = support_cutoff(family, t1, t2, params, tol)?;
        Self::compute(family, t1, t2, params, n_max, ctrl)
    }

    pub fn n_max(&self) -> usize {
        self.pmf.len() - 1
    }

    /// Σ pmf + overflow.
    pub fn total(&self) -> f64 {
        crate::specfun::series::ksum(
            self.pmf
                .iter()
                .copied()
                .chain(std::iter::once(self.overflow)),
        )
    }

    /// Probabilities of {0}, ..., {n_max}, {> n_max}.
    pub fn binned(&self) -> Vec<f64> {
        let mut v = self.pmf.clone();
        v.push(self.overflow);
        v
    }
}

/// Support size used by [`CountLaw::auto`].
pub fn support_cutoff(
    family: CountFamily,
    t1: f64,
    t2: f64,
    params: &FieldParams,
    tol: f64,
) -> Result<usize> {
    let x = family.scale(t1, t2, params);
    let base = 20 + 10 * x.ceil() as usize;
    if family.heavy_tailed(params) {
        return Ok(base);
    }
    let tail = |n: usize| -> Result<f64> {
        match family {
            CountFamily::Prf | CountFamily::Sfprf => Ok(poisson_upper_tail(n as u64, x)),
            CountFamily::Tfprf | CountFamily::Stfprf => tfprf_tail(n as u64, t1, t2, params),
        }
    };
    let mut n = base.min(8);
    while tail(n)? >= tol / 10.0 {
        n = n * 3 / 2 + 1;
        if n > 100_000 {
            return Err(Error::NonConvergence {
                op: "support_cutoff",
                terms: n,
            });
        }
    }
    Ok(n)
}

/// E_α(−z), z ≥ 0: the series where it is reliable, otherwise the
/// inverse stable representation.
pub fn ml1_neg(alpha: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_nonneg("z", z)?;
    match ml1(alpha, -z, ctrl) {
        Ok(v) => Ok(v),
        Err(e) if e.is_numerical_limit() => ml1_neg_mixture(alpha, z),
        Err(e) => Err(e),
    }
}

/// ₂Ψ₂[(1,1),(1,1);(1,α1),(1,α2) | −z], z ≥ 0: the series where it
/// converges and is reliable, otherwise the product representation.
pub fn psi22_neg(alpha1: f64, alpha2: f64, z: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_nonneg("z", z)?;
    match psi22(alpha1, alpha2, -z, ctrl) {
        Ok(v) => Ok(v),
        Err(e) if e.is_numerical_limit() => psi22_neg_mixture(alpha1, alpha2, z),
        Err(e) => Err(e),
    }
}
