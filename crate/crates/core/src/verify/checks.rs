use super::stats::{
    correlation, empirical_cf, empirical_pmf_counts, ks_critical_two_sample, ks_two_sample,
    mean_and_se, tv_distance, tv_null_distribution, upper_quantile,
};
use crate::dists::{ml1_neg, psi22_neg, CompoundParams, CountFamily, CountLaw, FieldParams};
use crate::error::{check_positive, Error, Result};
use crate::fields::compound::cprf;
use crate::fields::limits::{scaled_draw, LimitVariant};
use crate::fields::points::prf_points;
use crate::fields::rng::replicate;
use crate::fields::timechange::{count_draw, ml_compound_direct, ml_compound_subordinated};
use crate::fields::Rect;
use crate::report::ComparisonReport;
use crate::specfun::SeriesControl;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Key separating the second independent sample in two-sample checks.
const SECOND_SAMPLE: u64 = 0x9e37_79b9_7f4a_7c15;
const TV_CALIBRATION_REPS: usize = 1000;
const TV_QUANTILE: f64 = 0.995;
const TV_QUANTILE_DEGENERATE: f64 = 0.95;
const PMF_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeChangeVariant {
    Sfprf,
    Tfprf,
    Stfprf,
    MlCompound,
}

impl TimeChangeVariant {
    pub const ALL: [TimeChangeVariant; 4] = [
        TimeChangeVariant::Sfprf,
        TimeChangeVariant::Tfprf,
        TimeChangeVariant::Stfprf,
        TimeChangeVariant::MlCompound,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TimeChangeVariant::Sfprf => "sfprf",
            TimeChangeVariant::Tfprf => "tfprf",
            TimeChangeVariant::Stfprf => "stfprf",
            TimeChangeVariant::MlCompound => "ml_compound",
        }
    }
}

impl fmt::Display for TimeChangeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TimeChangeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TimeChangeVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown time-change variant '{s}'")))
    }
}

fn check_samples(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    Ok(())
}

/// Sampled time-changed construction against the series law.
///
/// Count variants compare by TV with an overflow bin; the threshold is the
/// 99.5% point of the TV of multinomial resamples of the exact law at the
/// same n (95% when all orders are 1 and the sampler is exactly Poisson).
/// `ml_compound` compares the direct and subordinated samplers by a
/// two-sample KS test at the 1% level; it reads σ and β from `compounding`
/// (default σ = 1, β = `params.beta`).
pub fn check_timechange(
    variant: TimeChangeVariant,
    params: &FieldParams,
    compounding: Option<&CompoundParams>,
    point: (f64, f64),
    n_samples: usize,
    seed: u64,
    ctrl: &SeriesControl,
) -> Result<ComparisonReport> {
    params.validate()?;
    check_samples(n_samples)?;
    let (t1, t2) = point;
    check_positive("t1", t1)?;
    check_positive("t2", t2)?;
    let family = match variant {
        TimeChangeVariant::Sfprf => CountFamily::Sfprf,
        TimeChangeVariant::Tfprf => CountFamily::Tfprf,
        TimeChangeVariant::Stfprf => CountFamily::Stfprf,
        TimeChangeVariant::MlCompound => {
            let (sigma, beta) = compounding.map_or((1.0, params.beta), |c| (c.sigma, c.beta_c));
            let lam = params.lambda;
            let a = replicate(seed, n_samples, |r| {
                ml_compound_direct(t1, t2, lam, sigma, beta, r)
            });
            let b = replicate(seed ^ SECOND_SAMPLE, n_samples, |r| {
                ml_compound_subordinated(t1, t2, lam, sigma, beta, r)
            });
            let d = ks_two_sample(&a, &b);
            return Ok(ComparisonReport::upper(
                format!("timechange/{variant}"),
                "ks_two_sample",
                d,
                ks_critical_two_sample(n_samples, n_samples),
            )
            .with_n(n_samples)
            .with_seed(seed)
            .detail("sigma", sigma)
            .detail("beta_c", beta)
            .detail("lambda", lam)
            .detail("point", [t1, t2]));
        }
    };
    let law = CountLaw::auto(family, t1, t2, params, PMF_TOL, ctrl)?;
    let exact = law.binned();
    let draws = replicate(seed, n_samples, |r| count_draw(family, params, t1, t2, r));
    let emp = empirical_pmf_counts(&draws).binned(law.n_max());
    let tv = tv_distance(&emp, &exact);
    let null = tv_null_distribution(&exact, n_samples, TV_CALIBRATION_REPS, seed ^ SECOND_SAMPLE);
    let degenerate = params.alpha1 == 1.0 && params.alpha2 == 1.0 && params.beta == 1.0;
    let threshold = upper_quantile(
        &null,
        if degenerate {
            TV_QUANTILE_DEGENERATE
        } else {
            TV_QUANTILE
        },
    );
    Ok(
        ComparisonReport::upper(format!("timechange/{variant}"), "tv", tv, threshold)
            .with_n(n_samples)
            .with_seed(seed)
            .detail("params", params)
            .detail("point", [t1, t2])
            .detail("n_max", law.n_max())
            .detail("overflow_exact", law.overflow)
            .detail("overflow_empirical", emp[law.n_max() + 1])
            .detail("route", law.route)
            .detail("null_tv_median", upper_quantile(&null, 0.5))
            .detail("degenerate", degenerate),
    )
}

/// Two points (t1, t2) of the plane.
pub type PointPair = ((f64, f64), (f64, f64));

/// Product moments E X(p)X(q) of the unit-rate normal compound field against
/// (p1 ∧ q1)(p2 ∧ q2), each within 3 standard errors.
pub fn check_covariance(
    pairs: &[PointPair],
    n_samples: usize,
    seed: u64,
) -> Result<ComparisonReport> {
    check_samples(n_samples)?;
    if pairs.is_empty() {
        return Err(Error::invalid("no point pairs"));
    }
    let (mut m1, mut m2) = (0.0f64, 0.0f64);
    for &(p, q) in pairs {
        for (a, b) in [p, q] {
            check_positive("coordinate", a)?;
            check_positive("coordinate", b)?;
            m1 = m1.max(a);
            m2 = m2.max(b);
        }
    }
    let rect = Rect::origin(m1, m2)?;
    let normal = CompoundParams::normal();
    let rows = replicate(seed, n_samples, |r| {
        let f = cprf(&prf_points(1.0, &rect, r), &normal, r);
        pairs
            .iter()
            .map(|&(p, q)| f.eval(p.0, p.1) * f.eval(q.0, q.1))
            .collect::<Vec<f64>>()
    });
    let parts = pairs
        .iter()
        .enumerate()
        .map(|(k, &(p, q))| {
            let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            let (m, se) = mean_and_se(&col);
            let target = p.0.min(q.0) * p.1.min(q.1);
            ComparisonReport::upper(
                format!("covariance/({},{})x({},{})", p.0, p.1, q.0, q.1),
                "abs_z",
                (m - target).abs() / se,
                3.0,
            )
            .with_n(n_samples)
            .with_seed(seed)
            .detail("estimate", m)
            .detail("target", target)
            .detail("standard_error", se)
        })
        .collect();
    Ok(ComparisonReport::all("covariance", parts))
}

/// Characteristic function of the limit law at u.
pub fn limit_cf(
    v: LimitVariant,
    p: &FieldParams,
    t1: f64,
    t2: f64,
    u: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let h = u * u / 2.0;
    match v {
        LimitVariant::GaussianSheet => Ok((-h * t1 * t2).exp()),
        LimitVariant::TcOneAxis => ml1_neg(p.alpha1, t1.powf(p.alpha1) * t2 * h, ctrl),
        LimitVariant::TcTwoAxis | LimitVariant::ProductTc => {
            psi22_neg(p.alpha1, p.alpha2, p.time_scale(t1, t2) * h, ctrl)
        }
        LimitVariant::StfCompound => psi22_neg(
            p.alpha1,
            p.alpha2,
            p.time_scale(t1, t2) * h.powf(p.beta),
            ctrl,
        ),
    }
}

/// Exact characteristic function of the scaled field at scale n.
pub fn scaled_cf(
    v: LimitVariant,
    p: &FieldParams,
    n: f64,
    t1: f64,
    t2: f64,
    u: f64,
    ctrl: &SeriesControl,
) -> Result<f64> {
    let h = u * u / 2.0;
    let n2 = n * n;
    match v {
        LimitVariant::GaussianSheet => Ok((n2 * t1 * t2 * (-h / n2).exp_m1()).exp()),
        LimitVariant::TcOneAxis => ml1_neg(
            p.alpha1,
            -n * t1.powf(p.alpha1) * t2 * (-h / n).exp_m1(),
            ctrl,
        ),
        LimitVariant::TcTwoAxis | LimitVariant::ProductTc => psi22_neg(
            p.alpha1,
            p.alpha2,
            -n2 * p.time_scale(t1, t2) * (-h / n2).exp_m1(),
            ctrl,
        ),
        LimitVariant::StfCompound => {
            let w = (-(-h / n2).exp_m1()).powf(p.beta) * n2.powf(p.beta);
            psi22_neg(p.alpha1, p.alpha2, w * p.time_scale(t1, t2), ctrl)
        }
    }
}

/// Empirical CF gaps of the scaled field against its limit over `n_list`.
///
/// Replication i uses the same stream for every scale. One report per scale,
/// passing when the sup gap to the limit is within `3/√N` plus the exact
/// distance between the scale-n law and the limit; a final report bounds the
/// largest increase of the gap between consecutive scales by `1.6/√N`.
#[allow(clippy::too_many_arguments)]
pub fn check_limit(
    variant: LimitVariant,
    params: &FieldParams,
    n_list: &[f64],
    point: (f64, f64),
    u_grid: &[f64],
    n_samples: usize,
    seed: u64,
    ctrl: &SeriesControl,
) -> Result<Vec<ComparisonReport>> {
    params.validate()?;
    check_samples(n_samples)?;
    if n_list.is_empty() || u_grid.is_empty() {
        return Err(Error::invalid("empty scale list or u grid"));
    }
    for &n in n_list {
        check_positive("scale", n)?;
    }
    let (t1, t2) = point;
    check_positive("t1", t1)?;
    check_positive("t2", t2)?;
    let limit: Vec<f64> = u_grid
        .iter()
        .map(|&u| limit_cf(variant, params, t1, t2, u, ctrl))
        .collect::<Result<_>>()?;
    let draws = replicate(seed, n_samples, |r| {
        n_list
            .iter()
            .map(|&n| scaled_draw(variant, params, n, t1, t2, &mut r.clone()))
            .collect::<Vec<f64>>()
    });
    let noise = 3.0 / (n_samples as f64).sqrt();
    let mut reports = Vec::with_capacity(n_list.len() + 1);
    let mut gaps = Vec::with_capacity(n_list.len());
    for (k, &n) in n_list.iter().enumerate() {
        let col: Vec<f64> = draws.iter().map(|d| d[k]).collect();
        let ecf = empirical_cf(&col, u_grid);
        let exact: Vec<f64> = u_grid
            .iter()
            .map(|&u| scaled_cf(variant, params, n, t1, t2, u, ctrl))
            .collect::<Result<_>>()?;
        let sup = |f: &dyn Fn(usize) -> f64| (0..u_grid.len()).map(f).fold(0.0f64, f64::max);
        let gap = sup(&|i| (ecf[i] - Complex64::new(limit[i], 0.0)).norm());
        let sampler_gap = sup(&|i| (ecf[i] - Complex64::new(exact[i], 0.0)).norm());
        let bias = sup(&|i| (exact[i] - limit[i]).abs());
        gaps.push(gap);
        reports.push(
            ComparisonReport::upper(
                format!("limit/{variant}/n={n}"),
                "sup_cf_gap",
                gap,
                noise + bias,
            )
            .with_n(n_samples)
            .with_seed(seed)
            .detail("scale", n)
            .detail("sampler_gap", sampler_gap)
            .detail("law_gap", bias)
            .detail("u_grid", u_grid)
            .detail("point", [t1, t2]),
        );
    }
    let rise = gaps.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    reports.push(
        ComparisonReport::upper(
            format!("limit/{variant}/monotone"),
            "max_gap_increase",
            rise,
            1.6 / (n_samples as f64).sqrt(),
        )
        .with_n(n_samples)
        .with_seed(seed)
        .detail("scales", n_list)
        .detail("gaps", &gaps),
    );
    Ok(reports)
}

/// Stationarity and independence of rectangular increments of a compound field.
///
/// For each pair: equal-area rectangles get a two-sample KS test (first
/// rectangle on even replications, second on odd ones); disjoint rectangles get
/// a correlation bound of 3/√N. Overlapping pairs only report the sample
/// correlation next to |A ∩ B| / √(|A||B|).
pub fn check_increment_properties(
    lambda: f64,
    compounding: &CompoundParams,
    rects: &[(Rect, Rect)],
    n_samples: usize,
    seed: u64,
) -> Result<ComparisonReport> {
    check_positive("lambda", lambda)?;
    check_samples(n_samples)?;
    if rects.is_empty() {
        return Err(Error::invalid("no rectangle pairs"));
    }
    let m1 = rects
        .iter()
        .map(|(a, b)| a.t1.max(b.t1))
        .fold(0.0, f64::max);
    let m2 = rects
        .iter()
        .map(|(a, b)| a.t2.max(b.t2))
        .fold(0.0, f64::max);
    let bbox = Rect::origin(m1, m2)?;
    let rows = replicate(seed, n_samples, |r| {
        let f = cprf(&prf_points(lambda, &bbox, r), compounding, r);
        rects
            .iter()
            .map(|(a, b)| (f.increment(a), f.increment(b)))
            .collect::<Vec<_>>()
    });
    let mut parts = Vec::new();
    for (k, (a, b)) in rects.iter().enumerate() {
        let xa: Vec<f64> = rows.iter().map(|r| r[k].0).collect();
        let xb: Vec<f64> = rows.iter().map(|r| r[k].1).collect();
        let tag = format!(
            "({},{}]x({},{}] vs ({},{}]x({},{}]",
            a.s1, a.t1, a.s2, a.t2, b.s1, b.t1, b.s2, b.t2
        );
        if (a.area() - b.area()).abs() <= 1e-12 * a.area().max(b.area()) {
            let even: Vec<f64> = xa.iter().step_by(2).copied().collect();
            let odd: Vec<f64> = xb.iter().skip(1).step_by(2).copied().collect();
            parts.push(
                ComparisonReport::upper(
                    format!("stationarity/{tag}"),
                    "ks_two_sample",
                    ks_two_sample(&even, &odd),
                    ks_critical_two_sample(even.len(), odd.len()),
                )
                .with_n(n_samples)
                .with_seed(seed),
            );
        }
        let rho = correlation(&xa, &xb);
        if a.is_disjoint(b) {
            parts.push(
                ComparisonReport::upper(
                    format!("independence/{tag}"),
                    "abs_correlation",
                    rho.abs(),
                    3.0 / (n_samples as f64).sqrt(),
                )
                .with_n(n_samples)
                .with_seed(seed),
            );
        } else {
            let w = (a.t1.min(b.t1) - a.s1.max(b.s1)).max(0.0);
            let h = (a.t2.min(b.t2) - a.s2.max(b.s2)).max(0.0);
            let share = w * h / (a.area() * b.area()).sqrt();
            let r = ComparisonReport::upper(format!("overlap/{tag}"), "not_asserted", 0.0, 0.0)
                .with_n(n_samples)
                .with_seed(seed)
                .detail("correlation", rho)
                .detail("overlap_share", share)
                .detail("asserted", false);
            parts.push(r);
        }
    }
    Ok(ComparisonReport::all("increments", parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::stats::DEFAULT_U_GRID;

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn variant_names_round_trip() {
        for v in TimeChangeVariant::ALL {
            assert_eq!(v.name().parse::<TimeChangeVariant>().unwrap(), v);
        }
        assert!("fprf".parse::<TimeChangeVariant>().is_err());
    }

    #[test]
    fn timechange_deterministic() {
        let p = FieldParams::space_fractional(1.0, 0.7).unwrap();
        let a = check_timechange(
            TimeChangeVariant::Sfprf,
            &p,
            None,
            (1.0, 1.0),
            5000,
            3,
            &ctrl(),
        )
        .unwrap();
        let b = check_timechange(
            TimeChangeVariant::Sfprf,
            &p,
            None,
            (1.0, 1.0),
            5000,
            3,
            &ctrl(),
        )
        .unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.passed, "{}", a.to_json());
    }

    #[test]
    fn degenerate_orders_match_poisson_tightly() {
        let p = FieldParams::poisson(1.0).unwrap();
        for v in [
            TimeChangeVariant::Sfprf,
            TimeChangeVariant::Tfprf,
            TimeChangeVariant::Stfprf,
        ] {
            let r = check_timechange(v, &p, None, (1.0, 1.0), 100_000, 9, &ctrl()).unwrap();
            assert!(
                r.passed && r.value < 0.005 && r.threshold < 0.005,
                "{}",
                r.summary()
            );
        }
    }

    #[test]
    fn limit_at_u_zero_is_exact() {
        let p = FieldParams::new(1.0, 0.6, 0.8, 0.7).unwrap();
        for v in LimitVariant::ALL {
            let r = check_limit(v, &p, &[5.0], (1.0, 1.0), &[0.0], 200, 1, &ctrl()).unwrap();
            assert_eq!(r[0].value, 0.0);
        }
    }

    #[test]
    fn scaled_cf_tends_to_limit() {
        let p = FieldParams::new(1.0, 0.6, 0.8, 0.7).unwrap();
        for v in LimitVariant::ALL {
            for &u in &DEFAULT_U_GRID {
                let l = limit_cf(v, &p, 1.0, 1.5, u, &ctrl()).unwrap();
                let a = scaled_cf(v, &p, 10.0, 1.0, 1.5, u, &ctrl()).unwrap();
                let b = scaled_cf(v, &p, 1000.0, 1.0, 1.5, u, &ctrl()).unwrap();
                assert!((b - l).abs() <= (a - l).abs() + 1e-12, "{v} {u}");
                assert!((b - l).abs() < 1e-3, "{v} {u} {b} {l}");
            }
        }
    }

    #[test]
    fn covariance_equal_points() {
        let r = check_covariance(&[((1.5, 1.5), (1.5, 1.5))], 20_000, 4).unwrap();
        assert!(r.passed, "{}", r.to_json());
    }

    #[test]
    fn increments_translated_and_overlapping() {
        let a = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let b = a.translate(1.5, 0.5).unwrap();
        let c = Rect::new(0.5, 1.5, 0.0, 1.0).unwrap();
        let r = check_increment_properties(
            1.0,
            &CompoundParams::normal(),
            &[(a, b), (a, c)],
            20_000,
            5,
        )
        .unwrap();
        assert!(r.passed, "{}", r.to_json());
        let parts = r.details["parts"].as_array().unwrap();
        let overlap = parts
            .iter()
            .find(|p| p["name"].as_str().unwrap().starts_with("overlap"))
            .unwrap();
        let rho = overlap["details"]["correlation"].as_f64().unwrap();
        assert!((rho - 0.5).abs() < 0.05, "{rho}");
    }
}
