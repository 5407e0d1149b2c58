use super::grid::ResidualGrid;
use crate::dists::mixture::stfprf_pmf_mixture;
use crate::dists::{
    fprf_pmf, sfprf_pmf, sfprf_pmf_dlambda, stfprf_pmf, CountFamily, CountLaw, FieldParams,
};
use crate::error::{check_nonneg, check_order, check_positive, Result};
use crate::fields::GridSpec;
use crate::specfun::fracdiff::{caputo_l1, frac_binom_coeffs};
use crate::specfun::gamma::poisson_pmf;
use crate::specfun::SeriesControl;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative step of the centered difference in λ.
pub const LAMBDA_STEP: f64 = 1e-4;

/// How ∂/∂λ of the pmf is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaDerivative {
    FiniteDifference,
    Series,
}

/// Absolute error that is irrelevant next to any residual threshold.
const PMF_ABS_FLOOR: f64 = 1e-12;

pub(crate) fn pde_ctrl(ctrl: &SeriesControl) -> SeriesControl {
    ctrl.with_abs_floor(ctrl.abs_floor.max(PMF_ABS_FLOOR))
}

/// Per-node vectors over states, node (i, j) at i * (n2 + 1) + j.
fn tabulate<F>(grid: &GridSpec, f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, f64) -> Result<Vec<f64>> + Sync,
{
    let w = grid.n2 + 1;
    (0..grid.nodes())
        .into_par_iter()
        .map(|k| f(grid.x1(k / w), grid.x2(k % w)))
        .collect()
}

/// Sequential Caputo passes, t1 first, of state `s` on every node.
fn mixed_derivative(
    grid: &GridSpec,
    table: &[Vec<f64>],
    s: usize,
    a1: f64,
    a2: f64,
) -> Result<Vec<f64>> {
    let (n1, n2) = (grid.n1, grid.n2);
    let w = n2 + 1;
    let mut d1 = vec![0.0; table.len()];
    for j in 0..=n2 {
        let col: Vec<f64> = (0..=n1).map(|i| table[i * w + j][s]).collect();
        for (i, v) in caputo_l1(&col, a1, grid.h1())?.into_iter().enumerate() {
            d1[i * w + j] = v;
        }
    }
    let mut d = vec![0.0; table.len()];
    for i in 0..=n1 {
        let row = &d1[i * w..(i + 1) * w];
        d[i * w..(i + 1) * w].copy_from_slice(&caputo_l1(row, a2, grid.h2())?);
    }
    Ok(d)
}

/// Node index ranges at distance ≥ margin from the axes, excluding the far edges.
fn window(grid: &GridSpec, margin: f64) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let first = |h: f64| ((margin / h - 1e-9).ceil() as usize).max(1);
    (first(grid.h1())..grid.n1, first(grid.h2())..grid.n2)
}

#[allow(clippy::too_many_arguments)]
fn assemble<R>(
    label: String,
    grid: &GridSpec,
    margin: f64,
    n_max: usize,
    table: &[Vec<f64>],
    orders: (f64, f64),
    rhs: R,
) -> Result<ResidualGrid>
where
    R: Fn(&[f64], usize) -> f64,
{
    let (wi, wj) = window(grid, margin);
    let w = grid.n2 + 1;
    let mut values = Vec::with_capacity(n_max + 1);
    for s in 0..=n_max {
        let d = mixed_derivative(grid, table, s, orders.0, orders.1)?;
        let mut v = Vec::with_capacity(wi.len() * wj.len());
        for i in wi.clone() {
            for j in wj.clone() {
                let k = i * w + j;
                v.push(d[k] - rhs(&table[k], s));
            }
        }
        values.push(v);
    }
    Ok(ResidualGrid::new(
        label,
        ["t1", "t2"],
        grid.h1().max(grid.h2()),
        wi.map(|i| grid.x1(i)).collect(),
        wj.map(|j| grid.x2(j)).collect(),
        (0..=n_max as u64).collect(),
        values,
    ))
}

/// (n+1)λ p(n+1) − (2n+1)λ p(n) + nλ p(n−1).
fn birth_death(p: &[f64], n: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    let below = if n == 0 { 0.0 } else { nf * p[n - 1] };
    lambda * ((nf + 1.0) * p[n + 1] - (2.0 * nf + 1.0) * p[n] + below)
}

/// Residual of the PRF system with ∂²/∂t2∂t1 by centered cross-differences.
pub fn residual_prf_system(n_max: usize, grid: &GridSpec, lambda: f64) -> Result<ResidualGrid> {
    check_positive("lambda", lambda)?;
    let table = tabulate(grid, |a, b| {
        Ok((0..=n_max as u64 + 1)
            .map(|n| poisson_pmf(n, lambda * a * b))
            .collect())
    })?;
    assemble(
        format!("prf lambda={lambda}"),
        grid,
        0.0,
        n_max,
        &table,
        (1.0, 1.0),
        |p, n| birth_death(p, n, lambda),
    )
}

/// Same residual with the mixed derivative taken symbolically:
/// ∂²p(n)/∂t2∂t1 = λ(p(n−1) − p(n)) + λμ(p(n−2) − 2p(n−1) + p(n)), μ = λt1t2.
pub fn residual_prf_analytic(n_max: usize, grid: &GridSpec, lambda: f64) -> Result<ResidualGrid> {
    check_positive("lambda", lambda)?;
    let (wi, wj) = window(grid, 0.0);
    let mut values = vec![Vec::new(); n_max + 1];
    for i in wi.clone() {
        for j in wj.clone() {
            let mu = lambda * grid.x1(i) * grid.x2(j);
            let p = |n: i64| {
                if n < 0 {
                    0.0
                } else {
                    poisson_pmf(n as u64, mu)
                }
            };
            for (n, v) in values.iter_mut().enumerate() {
                let m = n as i64;
                let lhs =
                    lambda * (p(m - 1) - p(m)) + lambda * mu * (p(m - 2) - 2.0 * p(m - 1) + p(m));
                let table: Vec<f64> = (0..=m + 1).map(p).collect();
                v.push(lhs - birth_death(&table, n, lambda));
            }
        }
    }
    Ok(ResidualGrid::new(
        format!("prf-analytic lambda={lambda}"),
        ["t1", "t2"],
        grid.h1().max(grid.h2()),
        wi.map(|i| grid.x1(i)).collect(),
        wj.map(|j| grid.x2(j)).collect(),
        (0..=n_max as u64).collect(),
        values,
    ))
}

/// Residual of the time-fractional system on nodes at distance ≥ `margin`
/// from the axes.
pub fn residual_fprf_system(
    n_max: usize,
    grid: &GridSpec,
    params: &FieldParams,
    margin: f64,
    ctrl: &SeriesControl,
) -> Result<ResidualGrid> {
    let ctrl = &pde_ctrl(ctrl);
    params.validate()?;
    check_nonneg("margin", margin)?;
    let p = FieldParams {
        beta: 1.0,
        ..*params
    };
    let table = tabulate(grid, |a, b| {
        let series: Result<Vec<f64>> = (0..=n_max as u64 + 1)
            .map(|n| fprf_pmf(n, a, b, &p, ctrl))
            .collect();
        match series {
            Ok(v) => Ok(v),
            Err(_) => Ok(CountLaw::compute(CountFamily::Tfprf, a, b, &p, n_max + 1, ctrl)?.pmf),
        }
    })?;
    let lambda = p.lambda;
    assemble(
        format!("fprf alpha=({},{}) lambda={lambda}", p.alpha1, p.alpha2),
        grid,
        margin,
        n_max,
        &table,
        (p.alpha1, p.alpha2),
        |q, n| birth_death(q, n, lambda),
    )
}

/// −(λ^{β+1}/β ∂_λ + λ^β) Σ_{k≤n} c_k p(n−k); `v` holds p(0..=n_max) then ∂_λp(0..=n_max).
fn space_fractional_rhs(v: &[f64], n: usize, c: &[f64], beta: f64, lambda: f64) -> f64 {
    let m = v.len() / 2;
    let (p, dp) = v.split_at(m);
    let q: f64 = (0..=n).map(|k| c[k] * p[n - k]).sum();
    let dq: f64 = (0..=n).map(|k| c[k] * dp[n - k]).sum();
    -(lambda.powf(beta + 1.0) / beta * dq + lambda.powf(beta) * q)
}

fn centered_lambda<F: Fn(f64) -> Result<f64>>(f: F, lambda: f64) -> Result<f64> {
    let e = LAMBDA_STEP * lambda;
    Ok((f(lambda + e)? - f(lambda - e)?) / (2.0 * e))
}

fn sfprf_node(
    a: f64,
    b: f64,
    n_max: usize,
    alpha: f64,
    lambda: f64,
    route: LambdaDerivative,
    ctrl: &SeriesControl,
) -> Result<Vec<f64>> {
    let mut v = Vec::with_capacity(2 * n_max + 2);
    for n in 0..=n_max as u64 {
        v.push(sfprf_pmf(n, a, b, alpha, lambda, ctrl)?);
    }
    for n in 0..=n_max as u64 {
        v.push(match route {
            LambdaDerivative::Series => sfprf_pmf_dlambda(n, a, b, alpha, lambda, ctrl)?,
            LambdaDerivative::FiniteDifference => {
                centered_lambda(|l| sfprf_pmf(n, a, b, alpha, l, ctrl), lambda)?
            }
        });
    }
    Ok(v)
}

/// Residual of the space-fractional system; the mixed t-derivative is the
/// centered cross-difference.
pub fn residual_sfprf_system(
    n_max: usize,
    grid: &GridSpec,
    alpha: f64,
    lambda: f64,
    route: LambdaDerivative,
    ctrl: &SeriesControl,
) -> Result<ResidualGrid> {
    let ctrl = &pde_ctrl(ctrl);
    check_order("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    let table = tabulate(grid, |a, b| {
        sfprf_node(a, b, n_max, alpha, lambda, route, ctrl)
    })?;
    let c = frac_binom_coeffs(alpha, n_max);
    assemble(
        format!("sfprf alpha={alpha} lambda={lambda} dlambda={route:?}"),
        grid,
        0.0,
        n_max,
        &table,
        (1.0, 1.0),
        |v, n| space_fractional_rhs(v, n, &c, alpha, lambda),
    )
}

/// Largest gap between the term-wise and finite-difference λ-derivatives
/// of the SFPRF pmf over the grid nodes and states 0..=n_max.
pub fn sfprf_lambda_derivative_gap(
    n_max: usize,
    grid: &GridSpec,
    alpha: f64,
    lambda: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let ctrl = &pde_ctrl(ctrl);
    check_order("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    let a = tabulate(grid, |x, y| {
        sfprf_node(x, y, n_max, alpha, lambda, LambdaDerivative::Series, ctrl)
    })?;
    let b = tabulate(grid, |x, y| {
        sfprf_node(
            x,
            y,
            n_max,
            alpha,
            lambda,
            LambdaDerivative::FiniteDifference,
            ctrl,
        )
    })?;
    Ok(a.iter()
        .zip(&b)
        .flat_map(|(u, v)| {
            u[n_max + 1..]
                .iter()
                .zip(&v[n_max + 1..])
                .map(|(x, y)| (x - y).abs())
        })
        .fold(0.0, f64::max))
}

fn stfprf_table(
    n_max: usize,
    a: f64,
    b: f64,
    p: &FieldParams,
    ctrl: &SeriesControl,
) -> Result<Vec<f64>> {
    let series: Result<Vec<f64>> = (0..=n_max as u64)
        .map(|n| stfprf_pmf(n, a, b, p, ctrl))
        .collect();
    match series {
        Ok(v) => Ok(v),
        Err(e) if e.is_numerical_limit() => stfprf_pmf_mixture(n_max, a, b, p),
        Err(e) => Err(e),
    }
}

/// Residual of the space-time fractional system on nodes at distance ≥
/// `margin` from the axes; ∂_λ by centered differences.
pub fn residual_stfprf_system(
    n_max: usize,
    grid: &GridSpec,
    params: &FieldParams,
    margin: f64,
    ctrl: &SeriesControl,
) -> Result<ResidualGrid> {
    let ctrl = &pde_ctrl(ctrl);
    params.validate()?;
    check_nonneg("margin", margin)?;
    let p = *params;
    let table = tabulate(grid, |a, b| {
        let mut v = stfprf_table(n_max, a, b, &p, ctrl)?;
        if a == 0.0 || b == 0.0 {
            v.extend(std::iter::repeat_n(0.0, n_max + 1));
            return Ok(v);
        }
        let e = LAMBDA_STEP * p.lambda;
        let up = stfprf_table(
            n_max,
            a,
            b,
            &FieldParams {
                lambda: p.lambda + e,
                ..p
            },
            ctrl,
        )?;
        let dn = stfprf_table(
            n_max,
            a,
            b,
            &FieldParams {
                lambda: p.lambda - e,
                ..p
            },
            ctrl,
        )?;
        v.extend(up.iter().zip(&dn).map(|(u, d)| (u - d) / (2.0 * e)));
        Ok(v)
    })?;
    let c = frac_binom_coeffs(p.beta, n_max);
    assemble(
        format!(
            "stfprf alpha=({},{}) beta={} lambda={}",
            p.alpha1, p.alpha2, p.beta, p.lambda
        ),
        grid,
        margin,
        n_max,
        &table,
        (p.alpha1, p.alpha2),
        |v, n| space_fractional_rhs(v, n, &c, p.beta, p.lambda),
    )
}
