//! Laws of the time-changed fields as expectations over inverse stable
//! random times, evaluated with the product rule of
//! [`InverseStableLaw`].
//!
//! The TFPRF count is Poisson(λ t1^α1 t2^α2 L1 L2) and the STFPRF count is
//! the SFPRF count at scale x L1 L2, with L1, L2 independent inverse stable
//! variables. These representations hold for every argument, so they also
//! cover the ranges where the alternating series diverge.

use super::counts::sfprf_coefficients;
use super::params::FieldParams;
use crate::error::{check_nonneg, check_order, Result};
use crate::specfun::gamma::{gamma_p, poisson_upper_tail};
use crate::specfun::mwright::InverseStableLaw;
use crate::specfun::series::ksum;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

const CHUNK: usize = 4096;
const MIN_WEIGHT: f64 = 1e-22;

/// Atoms (L1·L2, weight) of the product of two independent inverse stable
/// variables.
#[derive(Debug)]
pub struct ProductLaw {
    atoms: Vec<(f64, f64)>,
}

impl ProductLaw {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Arc<Self>> {
        check_order("alpha1", alpha1)?;
        check_order("alpha2", alpha2)?;
        type Cache = Mutex<HashMap<(u64, u64), Arc<ProductLaw>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (alpha1.to_bits(), alpha2.to_bits());
        if let Some(p) = cache.lock().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let l1 = InverseStableLaw::new(alpha1)?;
        let l2 = InverseStableLaw::new(alpha2)?;
        let mut atoms = Vec::with_capacity(l1.len() * l2.len());
        for (x, w) in l1.bulk_atoms() {
            for (y, v) in l2.bulk_atoms() {
                if w * v > MIN_WEIGHT {
                    atoms.push((x * y, w * v));
                }
            }
        }
        let p = Arc::new(ProductLaw { atoms });
        cache.lock().expect("cache lock").insert(key, p.clone());
        Ok(p)
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    /// E g(L1 L2), summed in fixed chunks so the result does not depend on
    /// the thread pool.
    pub fn expect<F>(&self, g: F) -> f64
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let parts: Vec<f64> = self
            .atoms
            .par_chunks(CHUNK)
            .map(|c| ksum(c.iter().map(|&(r, w)| w * g(r))))
            .collect();
        ksum(parts)
    }

    /// Vector-valued E g(L1 L2) for g writing into a buffer of length `len`.
    pub fn expect_vec<F>(&self, len: usize, g: F) -> Vec<f64>
    where
        F: Fn(f64, &mut [f64]) + Sync,
    {
        let parts: Vec<Vec<f64>> = self
            .atoms
            .par_chunks(CHUNK)
            .map(|c| {
                let mut acc = vec![0.0; len];
                let mut buf = vec![0.0; len];
                for &(r, w) in c {
                    buf.iter_mut().for_each(|b| *b = 0.0);
                    g(r, &mut buf);
                    for (a, b) in acc.iter_mut().zip(&buf) {
                        *a += w * b;
                    }
                }
                acc
            })
            .collect();
        (0..len).map(|i| ksum(parts.iter().map(|p| p[i]))).collect()
    }
}

fn poisson_row(mu: f64, out: &mut [f64]) {
    if mu > 700.0 {
        // Only states near mu carry mass; compute them in log space.
        for (n, o) in out.iter_mut().enumerate() {
            *o = crate::specfun::gamma::poisson_pmf(n as u64, mu);
        }
        return;
    }
    let mut p = (-mu).exp();
    for (n, o) in out.iter_mut().enumerate() {
        if n > 0 {
            p *= mu / n as f64;
        }
        *o = p;
    }
}

/// E_α(−z) = E e^{−zL} for z ≥ 0.
pub fn ml1_neg_mixture(alpha: f64, z: f64) -> Result<f64> {
    check_nonneg("z", z)?;
    Ok(InverseStableLaw::new(alpha)?.laplace(z))
}

/// ₂Ψ₂[(1,1),(1,1);(1,α1),(1,α2) | −z] = E e^{−z L1 L2} for z ≥ 0.
pub fn psi22_neg_mixture(alpha1: f64, alpha2: f64, z: f64) -> Result<f64> {
    check_nonneg("z", z)?;
    Ok(ProductLaw::new(alpha1, alpha2)?.expect(|r| (-z * r).exp()))
}

/// TFPRF pmf p(0..=n_max) by subordination.
pub fn tfprf_pmf_mixture(n_max: usize, t1: f64, t2: f64, params: &FieldParams) -> Result<Vec<f64>> {
    params.validate()?;
    let c = params.lambda * params.time_scale(t1, t2);
    let law = ProductLaw::new(params.alpha1, params.alpha2)?;
    Ok(law.expect_vec(n_max + 1, |r, buf| poisson_row(c * r, buf)))
}

/// STFPRF pmf p(0..=n_max) by subordination.
pub fn stfprf_pmf_mixture(
    n_max: usize,
    t1: f64,
    t2: f64,
    params: &FieldParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    if params.beta == 1.0 {
        return tfprf_pmf_mixture(n_max, t1, t2, params);
    }
    let x = params.time_scale(t1, t2) * params.lambda.powf(params.beta);
    let law = ProductLaw::new(params.alpha1, params.alpha2)?;
    let beta = params.beta;
    Ok(law.expect_vec(n_max + 1, |r, buf| {
        buf.copy_from_slice(&sfprf_coefficients(buf.len() - 1, x * r, beta));
    }))
}

/// P(N > m) for the count with pgf exp(−x(1 − u)^β), i.e.
/// N = Poisson(x^{1/β} S) with S positive β-stable.
pub fn sfprf_tail(m: u64, x: f64, beta: f64) -> Result<f64> {
    check_nonneg("x", x)?;
    check_order("beta", beta)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if beta == 1.0 {
        return Ok(poisson_upper_tail(m, x));
    }
    let law = InverseStableLaw::new(beta)?;
    let c = x.powf(1.0 / beta);
    let a = m as f64 + 1.0;
    Ok(law.expect(|l| gamma_p(a, c * l.powf(-1.0 / beta))))
}

/// P(N > m) for the TFPRF count.
pub fn tfprf_tail(m: u64, t1: f64, t2: f64, params: &FieldParams) -> Result<f64> {
    params.validate()?;
    let c = params.lambda * params.time_scale(t1, t2);
    if c == 0.0 {
        return Ok(0.0);
    }
    let law = ProductLaw::new(params.alpha1, params.alpha2)?;
    let a = m as f64 + 1.0;
    Ok(law.expect(|r| gamma_p(a, c * r)))
}

/// P(N > m) for the STFPRF count.
///
/// The SFPRF tail is smooth in log-scale, so it is tabulated once on a fine
/// logarithmic grid and interpolated for each product atom.
pub fn stfprf_tail(m: u64, t1: f64, t2: f64, params: &FieldParams) -> Result<f64> {
    params.validate()?;
    if params.beta == 1.0 {
        return tfprf_tail(m, t1, t2, params);
    }
    let x = params.time_scale(t1, t2) * params.lambda.powf(params.beta);
    if x == 0.0 {
        return Ok(0.0);
    }
    let law = ProductLaw::new(params.alpha1, params.alpha2)?;
    if law.atoms().len() == 1 {
        return sfprf_tail(m, x * law.atoms()[0].0, params.beta);
    }
    let (lo, hi) = law
        .atoms()
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(a, b), &(r, _)| {
            (a.min(r), b.max(r))
        });
    let (llo, lhi) = ((x * lo).ln() - 0.1, (x * hi).ln() + 0.1);
    const NGRID: usize = 2048;
    let step = (lhi - llo) / (NGRID - 1) as f64;
    let table: Vec<f64> = (0..NGRID)
        .into_par_iter()
        .map(|i| sfprf_tail(m, (llo + step * i as f64).exp(), params.beta))
        .collect::<Result<_>>()?;
    let interp = |y: f64| -> f64 {
        let s = ((y.ln() - llo) / step).clamp(0.0, (NGRID - 1) as f64);
        let i = (s.floor() as usize).clamp(1, NGRID - 3);
        let f = s - i as f64;
        let (p0, p1, p2, p3) = (table[i - 1], table[i], table[i + 1], table[i + 2]);
        // Catmull-Rom cubic.
        p1 + 0.5
            * f
            * (p2 - p0
                + f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + f * (3.0 * (p1 - p2) + p3 - p0)))
    };
    Ok(law.expect(|r| interp(x * r)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::counts::{fprf_pmf, sfprf_coefficients};
    use crate::specfun::mittag_leffler::ml1;
    use crate::specfun::series::SeriesControl;

    #[test]
    fn ml_laplace_matches_series() {
        for &(a, z) in &[(0.5, 1.0), (0.6, 1.0), (0.7, 1.5), (0.6, 2.0)] {
            let s = ml1(a, -z, &SeriesControl::default()).unwrap();
            let m = ml1_neg_mixture(a, z).unwrap();
            assert!((s - m).abs() < 1e-12, "a={a} z={z}: {s} {m}");
        }
    }

    #[test]
    fn tfprf_mixture_matches_series() {
        let p = FieldParams::time_fractional(1.0, 0.8, 0.9).unwrap();
        let mix = tfprf_pmf_mixture(10, 1.0, 1.0, &p).unwrap();
        for (n, m) in mix.iter().enumerate() {
            let s = fprf_pmf(n as u64, 1.0, 1.0, &p, &SeriesControl::default()).unwrap();
            assert!((s - m).abs() < 1e-11, "n={n}: {s} {m}");
        }
    }

    #[test]
    fn sfprf_tail_complements_pmf() {
        let (x, b) = (1.3, 0.8);
        let p = sfprf_coefficients(400, x, b);
        let head: f64 = p[..=400].iter().sum();
        let t = sfprf_tail(400, x, b).unwrap();
        assert!((head + t - 1.0).abs() < 1e-10, "{head} {t}");
    }
}
