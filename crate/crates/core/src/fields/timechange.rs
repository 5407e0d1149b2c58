use super::compound::mark_draw;
use super::rng::{exp1, poisson_draw, stream_rng, FieldRng};
use super::stable::{inverse_stable_draw, ln_stable_draw};
use crate::dists::{CompoundParams, CountFamily, FieldParams};
use crate::error::{check_nonneg, check_order, check_positive, Result};

/// N(H_α(t1, t2)): Poisson at rate λ on a stable sheet value (t1 t2)^{1/α} S_α.
pub fn sfprf_draw(alpha: f64, lambda: f64, t1: f64, t2: f64, rng: &mut FieldRng) -> u64 {
    let area = t1 * t2;
    if area == 0.0 {
        return 0;
    }
    let ln_h = area.ln() / alpha + ln_stable_draw(alpha, rng);
    poisson_draw(lambda * ln_h.exp(), rng)
}

/// N(L_{α1}(t1) L_{α2}(t2)).
pub fn tfprf_draw(p: &FieldParams, t1: f64, t2: f64, rng: &mut FieldRng) -> u64 {
    let l1 = inverse_stable_draw(p.alpha1, t1, rng);
    let l2 = inverse_stable_draw(p.alpha2, t2, rng);
    poisson_draw(p.lambda * l1 * l2, rng)
}

/// N(H_β(L_{α1}(t1), L_{α2}(t2))).
pub fn stfprf_draw(p: &FieldParams, t1: f64, t2: f64, rng: &mut FieldRng) -> u64 {
    let l1 = inverse_stable_draw(p.alpha1, t1, rng);
    let l2 = inverse_stable_draw(p.alpha2, t2, rng);
    let x = l1 * l2;
    if x == 0.0 {
        return 0;
    }
    let ln_h = x.ln() / p.beta + ln_stable_draw(p.beta, rng);
    poisson_draw(p.lambda * ln_h.exp(), rng)
}

/// Count at (t1, t2) for any family, reading only the orders that family uses.
pub fn count_draw(
    family: CountFamily,
    p: &FieldParams,
    t1: f64,
    t2: f64,
    rng: &mut FieldRng,
) -> u64 {
    match family {
        CountFamily::Prf => poisson_draw(p.lambda * t1 * t2, rng),
        CountFamily::Tfprf => tfprf_draw(p, t1, t2, rng),
        CountFamily::Sfprf => sfprf_draw(p.beta, p.lambda, t1, t2, rng),
        CountFamily::Stfprf => stfprf_draw(p, t1, t2, rng),
    }
}

fn check_point(t1: f64, t2: f64) -> Result<()> {
    check_nonneg("t1", t1)?;
    check_nonneg("t2", t2)
}

pub fn sample_sfprf(alpha: f64, lambda: f64, t1: f64, t2: f64, seed: u64) -> Result<u64> {
    check_order("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    check_point(t1, t2)?;
    Ok(sfprf_draw(alpha, lambda, t1, t2, &mut stream_rng(seed, 0)))
}

pub fn sample_tfprf(params: &FieldParams, t1: f64, t2: f64, seed: u64) -> Result<u64> {
    params.validate()?;
    check_point(t1, t2)?;
    Ok(tfprf_draw(params, t1, t2, &mut stream_rng(seed, 0)))
}

pub fn sample_stfprf(params: &FieldParams, t1: f64, t2: f64, seed: u64) -> Result<u64> {
    params.validate()?;
    check_point(t1, t2)?;
    Ok(stfprf_draw(params, t1, t2, &mut stream_rng(seed, 0)))
}

/// Compound sum with Mittag-Leffler marks over a PRF count, marks drawn one by one.
pub fn ml_compound_direct(
    t1: f64,
    t2: f64,
    lambda: f64,
    sigma: f64,
    beta_c: f64,
    rng: &mut FieldRng,
) -> f64 {
    let c = CompoundParams {
        kind: crate::dists::CompoundKind::MittagLeffler,
        sigma,
        beta_c,
    };
    let n = poisson_draw(lambda * t1 * t2, rng);
    let mut acc = crate::specfun::Accumulator::new();
    for _ in 0..n {
        acc.add(mark_draw(&c, rng));
    }
    acc.value()
}

/// Exponential compound sum Y at rate σ, then Y^{1/β} S_β.
pub fn ml_compound_subordinated(
    t1: f64,
    t2: f64,
    lambda: f64,
    sigma: f64,
    beta_c: f64,
    rng: &mut FieldRng,
) -> f64 {
    let n = poisson_draw(lambda * t1 * t2, rng);
    if n == 0 {
        return 0.0;
    }
    let mut acc = crate::specfun::Accumulator::new();
    for _ in 0..n {
        acc.add(exp1(rng));
    }
    let y = acc.value() / sigma;
    if beta_c == 1.0 {
        return y;
    }
    (y.ln() / beta_c + ln_stable_draw(beta_c, rng)).exp()
}

fn check_ml(t1: f64, t2: f64, lambda: f64, sigma: f64, beta_c: f64) -> Result<()> {
    check_point(t1, t2)?;
    check_positive("lambda", lambda)?;
    check_positive("sigma", sigma)?;
    check_order("beta_c", beta_c)
}

pub fn sample_ml_compound_field(
    t1: f64,
    t2: f64,
    lambda: f64,
    sigma: f64,
    beta_c: f64,
    seed: u64,
) -> Result<f64> {
    check_ml(t1, t2, lambda, sigma, beta_c)?;
    Ok(ml_compound_direct(
        t1,
        t2,
        lambda,
        sigma,
        beta_c,
        &mut stream_rng(seed, 0),
    ))
}

pub fn sample_ml_compound_subordinated(
    t1: f64,
    t2: f64,
    lambda: f64,
    sigma: f64,
    beta_c: f64,
    seed: u64,
) -> Result<f64> {
    check_ml(t1, t2, lambda, sigma, beta_c)?;
    Ok(ml_compound_subordinated(
        t1,
        t2,
        lambda,
        sigma,
        beta_c,
        &mut stream_rng(seed, 0),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rng::replicate;

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn order_one_reductions_are_exact() {
        let p = FieldParams::poisson(1.3).unwrap();
        for s in 0..50 {
            let a = sfprf_draw(1.0, 1.3, 1.2, 0.8, &mut stream_rng(s, 0));
            let b = poisson_draw(1.3 * 1.2 * 0.8, &mut stream_rng(s, 0));
            assert_eq!(a, b);
            let c = tfprf_draw(&p, 1.2, 0.8, &mut stream_rng(s, 0));
            assert_eq!(c, b);
        }
        let q = FieldParams::new(1.0, 0.7, 0.8, 1.0).unwrap();
        for s in 0..50 {
            let a = stfprf_draw(&q, 1.0, 1.5, &mut stream_rng(s, 0));
            let b = tfprf_draw(&q, 1.0, 1.5, &mut stream_rng(s, 0));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn sfprf_zero_probability() {
        let n = 100_000;
        let v = replicate(2, n, |r| {
            (sfprf_draw(0.7, 1.0, 1.0, 1.0, r) == 0) as u8 as f64
        });
        let p0 = (-1.0f64).exp();
        assert!((mean(&v) - p0).abs() < 4.0 * (p0 * (1.0 - p0) / n as f64).sqrt());
    }

    #[test]
    fn inverse_stable_mean() {
        let n = 100_000;
        let v = replicate(3, n, |r| inverse_stable_draw(0.5, 1.0, r));
        let target = 1.0 / crate::specfun::gamma(1.5);
        let m = mean(&v);
        let sd = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64).sqrt();
        assert!(
            (m - target).abs() < 3.0 * sd / (n as f64).sqrt(),
            "{m} {target}"
        );
    }

    #[test]
    fn ml_samplers_order_one_exponential() {
        let n = 50_000;
        let a = replicate(4, n, |r| ml_compound_direct(1.0, 1.0, 1.0, 1.0, 1.0, r));
        // E Y = λ t1 t2 / σ.
        assert!((mean(&a) - 1.0).abs() < 4.0 * (2.0 / n as f64).sqrt());
    }
}
