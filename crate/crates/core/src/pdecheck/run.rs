use super::counts::{
    residual_fprf_system, residual_prf_system, residual_sfprf_system, residual_stfprf_system,
    sfprf_lambda_derivative_gap, LambdaDerivative,
};
use super::density::{
    residual_exp_compound, residual_subordinator_density, subordinator_laplace_gap,
    subordinator_mass, TimeAxis, Window,
};
use super::grid::{refinement_study, ResidualGrid};
use crate::dists::{ExpCompound, FieldParams};
use crate::error::{check_positive, Error, Result};
use crate::fields::GridSpec;
use crate::report::ComparisonReport;
use crate::specfun::SeriesControl;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Smallest accepted norm reduction per halving of h.
pub const MIN_REFINEMENT_RATIO: f64 = 1.3;
/// Fraction of the shorter side excluded next to the axes in the fractional systems.
pub const AXIS_MARGIN: f64 = 0.25;

/// Named residual checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdeCheck {
    Prf,
    Fprf,
    Sfprf,
    Stfprf,
    Subordinator,
    ExpCompound,
}

impl PdeCheck {
    pub const ALL: [PdeCheck; 6] = [
        PdeCheck::Prf,
        PdeCheck::Fprf,
        PdeCheck::Sfprf,
        PdeCheck::Stfprf,
        PdeCheck::Subordinator,
        PdeCheck::ExpCompound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PdeCheck::Prf => "prf",
            PdeCheck::Fprf => "fprf",
            PdeCheck::Sfprf => "sfprf",
            PdeCheck::Stfprf => "stfprf",
            PdeCheck::Subordinator => "subordinator",
            PdeCheck::ExpCompound => "exp_compound",
        }
    }
}

impl fmt::Display for PdeCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PdeCheck {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PdeCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown pde check '{s}'")))
    }
}

/// Inputs shared by the residual checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeOptions {
    pub params: FieldParams,
    pub sigma: f64,
    pub n_max: usize,
    pub t1: f64,
    pub t2: f64,
    pub h: f64,
    pub ctrl: SeriesControl,
}

impl Default for PdeOptions {
    fn default() -> Self {
        PdeOptions {
            params: FieldParams {
                lambda: 1.0,
                alpha1: 1.0,
                alpha2: 1.0,
                beta: 1.0,
            },
            sigma: 1.0,
            n_max: 5,
            t1: 1.0,
            t2: 1.0,
            h: 1.0 / 128.0,
            ctrl: SeriesControl::default(),
        }
    }
}

/// Runs a check and returns its report together with the finest residual grid.
pub fn run_pde_check(check: PdeCheck, o: &PdeOptions) -> Result<(ComparisonReport, ResidualGrid)> {
    check_positive("h", o.h)?;
    o.params.validate()?;
    let p = o.params;
    let grid = |h: f64| GridSpec::with_step(o.t1, o.t2, h);
    let margin = AXIS_MARGIN * o.t1.min(o.t2);
    let name = format!("pde/{check}");
    match check {
        PdeCheck::Prf => {
            let r = residual_prf_system(o.n_max, &grid(o.h)?, p.lambda)?;
            let tol = 1e-4 * (128.0 * o.h).powi(2);
            Ok((
                ComparisonReport::upper(name, "residual_norm", r.norm, tol).detail("h", o.h),
                r,
            ))
        }
        PdeCheck::Fprf | PdeCheck::Stfprf => {
            let run = |h: f64| -> Result<ResidualGrid> {
                if check == PdeCheck::Fprf {
                    residual_fprf_system(o.n_max, &grid(h)?, &p, margin, &o.ctrl)
                } else {
                    residual_stfprf_system(o.n_max, &grid(h)?, &p, margin, &o.ctrl)
                }
            };
            let study = refinement_study(o.h, 2, run)?;
            let last = run(*study.steps.last().expect("three steps"))?;
            let rep = ComparisonReport::lower(
                name,
                "min_refinement_ratio",
                study.min_ratio(),
                MIN_REFINEMENT_RATIO,
            )
            .detail("steps", &study.steps)
            .detail("norms", &study.norms)
            .detail("margin", margin);
            Ok((rep, last))
        }
        PdeCheck::Sfprf => {
            let alpha = p.beta;
            let g = grid(o.h)?;
            let r = residual_sfprf_system(
                o.n_max,
                &g,
                alpha,
                p.lambda,
                LambdaDerivative::Series,
                &o.ctrl,
            )?;
            let tol = 1e-3 * (64.0 * o.h).powi(2);
            let gap = sfprf_lambda_derivative_gap(o.n_max, &g, alpha, p.lambda, &o.ctrl)?;
            let parts = vec![
                ComparisonReport::upper(format!("{name}/residual"), "residual_norm", r.norm, tol)
                    .detail("h", o.h),
                ComparisonReport::upper(format!("{name}/dlambda"), "route_gap", gap, 1e-6),
            ];
            Ok((ComparisonReport::all(name, parts), r))
        }
        PdeCheck::Subordinator => {
            let w = Window {
                x_lo: 0.5,
                x_hi: 4.0,
                t_lo: 0.5,
                t_hi: 1.5,
                t_fixed: o.t2,
                h: o.h,
            };
            let r = residual_subordinator_density(0.5, &w)?;
            let tol = 5e-3 * (128.0 * o.h).powf(1.5);
            let lap = [0.25, 1.0, 4.0]
                .iter()
                .map(|&u| subordinator_laplace_gap(1.0, o.t2, u))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let (total, below) = subordinator_mass(1e-4, o.t2, 0.01)?;
            let parts = vec![
                ComparisonReport::upper(format!("{name}/residual"), "residual_norm", r.norm, tol)
                    .detail("h", o.h),
                ComparisonReport::upper(format!("{name}/laplace"), "max_gap", lap, 1e-8),
                ComparisonReport::upper(
                    format!("{name}/mass"),
                    "abs_mass_defect",
                    (total - 1.0).abs(),
                    1e-8,
                ),
                ComparisonReport::lower(
                    format!("{name}/concentration"),
                    "mass_below_eps",
                    below,
                    0.99,
                ),
            ];
            Ok((ComparisonReport::all(name, parts), r))
        }
        PdeCheck::ExpCompound => {
            let axes: Vec<TimeAxis> = match (p.alpha1 == 1.0, p.alpha2 == 1.0) {
                (true, true) => vec![TimeAxis::T2, TimeAxis::T1],
                (true, false) => vec![TimeAxis::T2],
                (false, true) => vec![TimeAxis::T1],
                (false, false) => {
                    return Err(Error::invalid(
                        "the compound density equation needs one time order equal to 1",
                    ))
                }
            };
            let mut parts = Vec::new();
            let mut grids = Vec::new();
            for axis in axes {
                let (alpha, t_fixed) = match axis {
                    TimeAxis::T1 => (p.alpha1, o.t2),
                    TimeAxis::T2 => (p.alpha2, o.t1),
                };
                let w = Window {
                    x_lo: 0.2,
                    x_hi: 2.0,
                    t_lo: 0.2,
                    t_hi: 1.2,
                    t_fixed,
                    h: o.h,
                };
                let r = residual_exp_compound(axis, &w, &p, o.sigma, &o.ctrl)?;
                let tol = 1e-3 * (128.0 * o.h).powf(2.0 - alpha);
                parts.push(
                    ComparisonReport::upper(
                        format!("{name}/{axis:?}"),
                        "residual_norm",
                        r.norm,
                        tol,
                    )
                    .detail("h", o.h),
                );
                let (a, b) = match axis {
                    TimeAxis::T1 => (0.0, o.t2),
                    TimeAxis::T2 => (o.t1, 0.0),
                };
                let c = ExpCompound::new(a, b, &p, o.sigma, &o.ctrl)?;
                let init = [0.2, 0.5, 1.0, 2.0]
                    .iter()
                    .map(|&y| c.pdf(y).abs())
                    .fold(0.0, f64::max);
                parts.push(ComparisonReport::upper(
                    format!("{name}/{axis:?}/initial"),
                    "max_abs_density",
                    init,
                    0.0,
                ));
                grids.push(r);
            }
            Ok((ComparisonReport::all(name, parts), grids.remove(0)))
        }
    }
}
