use super::counts::pde_ctrl;
use super::grid::ResidualGrid;
use crate::dists::{ExpCompound, FieldParams};
use crate::error::{check_positive, Error, Result};
use crate::specfun::fracdiff::caputo_l1;
use crate::specfun::quad::{integrate, integrate_to_inf};
use crate::specfun::SeriesControl;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Rectangle [x_lo, x_hi] × [t_lo, t_hi] of a (space, time) plane, with the
/// remaining time coordinate fixed at `t_fixed` and node spacing `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_lo: f64,
    pub x_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub t_fixed: f64,
    pub h: f64,
}

impl Window {
    fn validate(&self) -> Result<()> {
        check_positive("h", self.h)?;
        check_positive("t_fixed", self.t_fixed)?;
        if self.x_lo.is_nan() || self.x_lo <= 0.0 {
            return Err(Error::invalid(format!(
                "spatial window must stay away from 0, got x_lo = {}",
                self.x_lo
            )));
        }
        if self.t_lo.is_nan()
            || self.t_lo <= 0.0
            || self.x_hi <= self.x_lo
            || self.t_hi <= self.t_lo
        {
            return Err(Error::invalid("window corners out of order"));
        }
        if self.first(self.x_lo) > self.last(self.x_hi)
            || self.first(self.t_lo) > self.last(self.t_hi)
        {
            return Err(Error::invalid("window holds no grid node"));
        }
        Ok(())
    }

    fn first(&self, v: f64) -> usize {
        (v / self.h - 1e-9).ceil() as usize
    }

    fn last(&self, v: f64) -> usize {
        (v / self.h + 1e-9).floor() as usize
    }
}

/// Density of H_{1/2}(t1, t2) with c = t1 t2: c/(2√π) x^{−3/2} e^{−c²/(4x)}.
pub fn levy_half_density(x: f64, c: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    c / (2.0 * PI.sqrt()) * x.powf(-1.5) * (-c * c / (4.0 * x)).exp()
}

/// Residual of ∂g/∂t1 = −t2 ∂^α g/∂x^α at α = 1/2 on the window, x-Caputo by L1
/// from x = 0 and ∂/∂t1 by centered differences; `t_fixed` is t2.
pub fn residual_subordinator_density(alpha: f64, w: &Window) -> Result<ResidualGrid> {
    if alpha != 0.5 {
        return Err(Error::invalid(format!(
            "the subordinator density is closed-form only at alpha = 0.5, got {alpha}"
        )));
    }
    w.validate()?;
    let h = w.h;
    let t2 = w.t_fixed;
    let nx = w.last(w.x_hi);
    let (i0, i1) = (w.first(w.t_lo), w.last(w.t_hi));
    let (j0, j1) = (w.first(w.x_lo), nx);
    let rows: Vec<Vec<f64>> = (i0..=i1)
        .into_par_iter()
        .map(|i| {
            let t1 = i as f64 * h;
            let row: Vec<f64> = (0..=nx)
                .map(|j| levy_half_density(j as f64 * h, t1 * t2))
                .collect();
            let d = caputo_l1(&row, alpha, h)?;
            Ok((j0..=j1)
                .map(|j| {
                    let x = j as f64 * h;
                    let dt = (levy_half_density(x, (t1 + h) * t2)
                        - levy_half_density(x, (t1 - h) * t2))
                        / (2.0 * h);
                    dt + t2 * d[j]
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(ResidualGrid::new(
        format!("subordinator alpha={alpha} t2={t2}"),
        ["t1", "x"],
        h,
        (i0..=i1).map(|i| i as f64 * h).collect(),
        (j0..=j1).map(|j| j as f64 * h).collect(),
        vec![0],
        vec![rows.concat()],
    ))
}

/// ∫ g dx and ∫₀^ε g dx by quadrature, for the initial condition g → δ.
pub fn subordinator_mass(t1: f64, t2: f64, eps: f64) -> Result<(f64, f64)> {
    check_positive("t1", t1)?;
    check_positive("t2", t2)?;
    check_positive("eps", eps)?;
    let c = t1 * t2;
    let below = integrate(|x| Ok(levy_half_density(x, c)), 0.0, eps, 1e-13, 1e-11)?.value;
    let above = integrate_to_inf(|x| Ok(levy_half_density(x, c)), eps, 1e-13, 1e-11)?.value;
    Ok((below + above, below))
}

/// |∫ e^{−ux} g dx − e^{−t1 t2 √u}|.
pub fn subordinator_laplace_gap(t1: f64, t2: f64, u: f64) -> Result<f64> {
    check_positive("u", u)?;
    let c = t1 * t2;
    let v = integrate_to_inf(
        |x| Ok((-u * x).exp() * levy_half_density(x, c)),
        0.0,
        1e-14,
        1e-12,
    )?
    .value;
    Ok((v - (-c * u.sqrt()).exp()).abs())
}

/// Time axis carrying the (fractional) derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeAxis {
    T1,
    T2,
}

/// Residual of σ D^α_t f = −(λ t' + D^α_t) ∂f/∂y for the exponential
/// compound density, with t the chosen axis (order α) and t' = `t_fixed`
/// the other one, whose order must be 1. Window coordinates are (t, y).
pub fn residual_exp_compound(
    axis: TimeAxis,
    w: &Window,
    params: &FieldParams,
    sigma: f64,
    ctrl: &SeriesControl,
) -> Result<ResidualGrid> {
    params.validate()?;
    check_positive("sigma", sigma)?;
    w.validate()?;
    let (alpha, other) = match axis {
        TimeAxis::T1 => (params.alpha1, params.alpha2),
        TimeAxis::T2 => (params.alpha2, params.alpha1),
    };
    if other != 1.0 {
        return Err(Error::invalid(
            "the compound density equation needs order 1 on the fixed axis",
        ));
    }
    let ctrl = &pde_ctrl(ctrl);
    let h = w.h;
    let nt = w.last(w.t_hi);
    let (i0, j0, j1) = (w.first(w.t_lo), w.first(w.x_lo), w.last(w.x_hi));
    let ys: Vec<f64> = (j0 - 1..=j1 + 1).map(|j| j as f64 * h).collect();
    // f and ∂f/∂y at every time node from 0 and every window y.
    let cols: Vec<(Vec<f64>, Vec<f64>)> = (0..=nt)
        .into_par_iter()
        .map(|k| {
            let t = k as f64 * h;
            let (t1, t2) = match axis {
                TimeAxis::T1 => (t, w.t_fixed),
                TimeAxis::T2 => (w.t_fixed, t),
            };
            let c = ExpCompound::new(t1, t2, params, sigma, ctrl)?;
            let f: Vec<f64> = ys.iter().map(|&y| c.pdf(y)).collect();
            let fy = (1..ys.len() - 1)
                .map(|m| (f[m + 1] - f[m - 1]) / (2.0 * h))
                .collect();
            Ok((f[1..ys.len() - 1].to_vec(), fy))
        })
        .collect::<Result<_>>()?;
    let ny = j1 - j0 + 1;
    let mut values = vec![0.0; (nt + 1 - i0) * ny];
    for m in 0..ny {
        let f: Vec<f64> = cols.iter().map(|c| c.0[m]).collect();
        let fy: Vec<f64> = cols.iter().map(|c| c.1[m]).collect();
        let df = caputo_l1(&f, alpha, h)?;
        let dfy = caputo_l1(&fy, alpha, h)?;
        for k in i0..=nt {
            values[(k - i0) * ny + m] = sigma * df[k] + params.lambda * w.t_fixed * fy[k] + dfy[k];
        }
    }
    Ok(ResidualGrid::new(
        format!(
            "exp-compound axis={axis:?} alpha={alpha} lambda={} sigma={sigma}",
            params.lambda
        ),
        ["t", "y"],
        h,
        (i0..=nt).map(|k| k as f64 * h).collect(),
        (j0..=j1).map(|j| j as f64 * h).collect(),
        vec![0],
        vec![values],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(h: f64) -> Window {
        Window {
            x_lo: 0.5,
            x_hi: 4.0,
            t_lo: 0.5,
            t_hi: 1.5,
            t_fixed: 1.0,
            h,
        }
    }

    #[test]
    fn window_touching_zero_fails() {
        let w = Window {
            x_lo: 0.0,
            ..win(0.125)
        };
        assert!(residual_subordinator_density(0.5, &w).is_err());
        assert!(residual_subordinator_density(0.6, &win(0.125)).is_err());
    }

    #[test]
    fn subordinator_residual_small() {
        let r = residual_subordinator_density(0.5, &win(1.0 / 128.0)).unwrap();
        assert!(r.norm < 5e-3, "{}", r.norm);
    }

    #[test]
    fn levy_laplace_and_mass() {
        for u in [0.3, 1.0, 4.0] {
            assert!(subordinator_laplace_gap(1.0, 1.5, u).unwrap() < 1e-10);
        }
        let (total, below) = subordinator_mass(0.01, 1.0, 0.01).unwrap();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(below > 0.9);
        let (_, below_small) = subordinator_mass(0.001, 1.0, 0.01).unwrap();
        assert!(below_small > below);
    }

    #[test]
    fn exp_compound_order_one_both_axes() {
        let p = FieldParams::poisson(1.0).unwrap();
        let w = Window {
            x_lo: 0.2,
            x_hi: 2.0,
            t_lo: 0.2,
            t_hi: 1.2,
            t_fixed: 1.0,
            h: 1.0 / 128.0,
        };
        let c = SeriesControl::default();
        for axis in [TimeAxis::T1, TimeAxis::T2] {
            let r = residual_exp_compound(axis, &w, &p, 1.0, &c).unwrap();
            assert!(r.norm < 1e-3, "{axis:?} {}", r.norm);
        }
        let q = FieldParams::time_fractional(1.0, 1.0, 0.6).unwrap();
        assert!(residual_exp_compound(TimeAxis::T1, &w, &q, 1.0, &c).is_err());
    }

    #[test]
    fn exp_compound_vanishes_at_time_zero() {
        let p = FieldParams::time_fractional(1.0, 1.0, 0.6).unwrap();
        let c = ExpCompound::new(1.0, 0.0, &p, 1.0, &SeriesControl::default()).unwrap();
        assert_eq!(c.pdf(0.7), 0.0);
        assert_eq!(c.atom(), 1.0);
    }
}
