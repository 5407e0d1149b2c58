//! The inverse stable law: M-Wright density and a product quadrature rule
//! for expectations over it.
//!
//! For α ∈ (0, 1), L = S^{−α} with S positive α-stable (E e^{−uS} = e^{−u^α})
//! has density M_α and Laplace transform E e^{−sL} = E_α(−s). It is the law
//! of the inverse α-stable subordinator at time 1.

use super::gamma::{gamma, ln_gamma_signed, rgamma};
use super::quad::{gauss_legendre, integrate};
use super::series::{sum_series, SeriesControl, Term};
use crate::error::{check_nonneg, check_order, Result};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// A(0⁺) = α^{k−1}(1−α) with k = 1/(1−α); the infimum of Kanter's function.
fn kanter_a0(alpha: f64) -> f64 {
    let k = 1.0 / (1.0 - alpha);
    alpha.powf(k - 1.0) * (1.0 - alpha)
}

pub fn mwright_series(alpha: f64, x: f64) -> Result<f64> {
    let ctrl = SeriesControl {
        max_cancellation: 1e-12,
        ..SeriesControl::default()
    };
    let lx = x.ln();
    let mut lf = 0.0;
    sum_series("mwright", &ctrl, |k| {
        if k > 0 {
            lf += (k as f64).ln();
        }
        let (lg, sg) = ln_gamma_signed(1.0 - alpha - alpha * k as f64);
        if sg == 0.0 {
            return Ok(Term::Zero);
        }
        let kx = k as f64 * lx;
        let sign = sg * if k % 2 == 1 { -1.0 } else { 1.0 };
        Ok(Term::from_log(sign, kx - lf - lg, kx.abs() + lf + lg.abs()))
    })
    .map(|s| s.value)
}

/// ln A(φ), finite where A itself would overflow.
fn ln_kanter_a(alpha: f64, phi: f64) -> f64 {
    let k = 1.0 / (1.0 - alpha);
    let sa = (alpha * phi).sin();
    k * (sa / phi.sin()).ln() + ((1.0 - alpha) * phi).sin().ln() - sa.ln()
}

pub fn mwright_integral(alpha: f64, x: f64) -> Result<f64> {
    let k = 1.0 / (1.0 - alpha);
    let ly = k * x.ln();
    let lc = k.ln() + (k - 1.0) * x.ln() - PI.ln();
    // ln A is increasing in φ; cut at each decade of A x^k up to the peak.
    let mut cuts = vec![0.0];
    for j in -16..=2 {
        let target = j as f64 * std::f64::consts::LN_10 - ly;
        if target <= kanter_a0(alpha).ln() {
            continue;
        }
        let (mut lo, mut hi) = (0.0, PI);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ln_kanter_a(alpha, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        cuts.push(0.5 * (lo + hi));
    }
    cuts.push(PI);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let r = integrate(
            |phi| {
                let la = ln_kanter_a(alpha, phi);
                let le = la + ly;
                Ok(if le > 6.6 || !le.is_finite() {
                    0.0
                } else {
                    (lc + la - le.exp()).exp()
                })
            },
            w[0],
            w[1],
            1e-13 * k,
            1e-12,
        )?;
        total += r.value;
    }
    Ok(total)
}

/// M-Wright density M_α(x) for α ∈ (0, 1) and x ≥ 0.
pub fn mwright(alpha: f64, x: f64) -> Result<f64> {
    check_order("alpha", alpha)?;
    check_nonneg("x", x)?;
    if alpha >= 1.0 {
        return Err(crate::Error::invalid("M-Wright density needs alpha < 1"));
    }
    if x == 0.0 {
        return Ok(rgamma(1.0 - alpha));
    }
    if x <= 1.0 {
        if let Ok(v) = mwright_series(alpha, x) {
            return Ok(v);
        }
    }
    mwright_integral(alpha, x)
}

/// Discrete quadrature rules for expectations over the inverse stable law.
///
/// Two rules are kept. The graded rule refines geometrically towards the
/// origin and suits integrands with features at small L (such as functions
/// of L^{−1/α}). The bulk rule uses uniform panels over the body of the
/// density and is much smaller, which matters for product expectations.
#[derive(Debug, Clone)]
pub struct InverseStableLaw {
    alpha: f64,
    graded: Vec<(f64, f64)>,
    bulk: Vec<(f64, f64)>,
}

fn panel_rule(alpha: f64, edges: &[f64], order: usize) -> Result<Vec<(f64, f64)>> {
    let (gx, gw) = gauss_legendre(order);
    let mut out = Vec::with_capacity(edges.len() * order);
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        for (t, w) in gx.iter().zip(&gw) {
            let x = c + h * t;
            let d = mwright(alpha, x)?;
            if d > 0.0 {
                out.push((x, w * h * d));
            }
        }
    }
    Ok(out)
}

/// Panel edges of width 1/(2k) over the last 40/k before `x_max`, where the
/// density falls off like exp(−c x^k). Empty unless that is finer than sd/8.
fn edge_zone(k: f64, x_max: f64, sd: f64) -> Vec<f64> {
    if 0.5 / k >= sd / 8.0 {
        return Vec::new();
    }
    let lo = (x_max - 40.0 / k).max(0.0);
    let n = ((x_max - lo) * 2.0 * k).ceil() as usize;
    (0..n)
        .map(|i| lo + (x_max - lo) * i as f64 / n as f64)
        .collect()
}

fn sorted_edges(mut edges: Vec<f64>) -> Vec<f64> {
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1e-300));
    edges
}

impl InverseStableLaw {
    /// Builds (or fetches from a process-wide cache) the rules for order α.
    pub fn new(alpha: f64) -> Result<Arc<Self>> {
        check_order("alpha", alpha)?;
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<InverseStableLaw>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = cache.lock().expect("cache lock").get(&alpha.to_bits()) {
            return Ok(r.clone());
        }
        let rule = Arc::new(Self::build(alpha)?);
        cache
            .lock()
            .expect("cache lock")
            .insert(alpha.to_bits(), rule.clone());
        Ok(rule)
    }

    fn build(alpha: f64) -> Result<Self> {
        if alpha == 1.0 {
            return Ok(InverseStableLaw {
                alpha,
                graded: vec![(1.0, 1.0)],
                bulk: vec![(1.0, 1.0)],
            });
        }
        let k = 1.0 / (1.0 - alpha);
        let x_max = (46.0 / kanter_a0(alpha)).powf(1.0 / k);
        let sd = (2.0 / gamma(1.0 + 2.0 * alpha) - 1.0 / gamma(1.0 + alpha).powi(2)).sqrt();

        let width = sd / 2.0;
        let nb = (x_max / width).ceil() as usize;
        let mut edges: Vec<f64> = (0..=nb).map(|i| i as f64 * x_max / nb as f64).collect();
        edges.extend(edge_zone(k, x_max, sd));
        let edges = sorted_edges(edges);
        let bulk = panel_rule(alpha, &edges, 12)?;

        let fine = sd / 4.0;
        let ratio: f64 = 1.25;
        let x_min = x_max * 1e-9;
        let mut edges = vec![0.0, x_min];
        while *edges.last().expect("non-empty") * ratio < fine {
            let next = edges.last().expect("non-empty") * ratio;
            edges.push(next);
        }
        let start = *edges.last().expect("non-empty");
        let nu = ((x_max - start) / fine).ceil().max(1.0) as usize;
        for i in 1..=nu {
            edges.push(start + (x_max - start) * i as f64 / nu as f64);
        }
        edges.extend(edge_zone(k, x_max, sd));
        let graded = panel_rule(alpha, &sorted_edges(edges), 12)?;
        Ok(InverseStableLaw {
            alpha,
            graded,
            bulk,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.graded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graded.is_empty()
    }

    /// (node, weight) pairs of the graded rule; weights sum to one up to
    /// quadrature error.
    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.graded.iter().copied()
    }

    /// (node, weight) pairs of the bulk rule.
    pub fn bulk_atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.bulk.iter().copied()
    }

    /// E g(L).
    pub fn expect<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        super::series::ksum(self.atoms().map(|(x, w)| w * g(x)))
    }

    /// E e^{−sL} = E_α(−s) for s ≥ 0.
    pub fn laplace(&self, s: f64) -> f64 {
        self.expect(|x| (-s * x).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_order_is_half_normal() {
        for &x in &[0.1f64, 0.9, 1.3, 3.0, 6.0] {
            let exact = (-x * x / 4.0).exp() / PI.sqrt();
            assert!((mwright(0.5, x).unwrap() - exact).abs() < 1e-13, "x={x}");
            assert!((mwright_integral(0.5, x).unwrap() - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn series_and_integral_agree() {
        for &a in &[0.2, 0.45, 0.7, 0.85, 0.999, 0.99995] {
            for &x in &[0.3, 0.5, 0.8] {
                let s = mwright_series(a, x).unwrap();
                let i = mwright_integral(a, x).unwrap();
                assert!((s - i).abs() < 1e-12 * s.max(1.0), "a={a} x={x} {s} {i}");
            }
        }
    }

    #[test]
    fn rule_moments() {
        for &a in &[0.3, 0.5, 0.6, 0.8, 0.999, 0.99995] {
            let r = InverseStableLaw::new(a).unwrap();
            assert!((r.expect(|_| 1.0) - 1.0).abs() < 1e-12);
            assert!((r.expect(|x| x) - 1.0 / gamma(1.0 + a)).abs() < 1e-12);
            assert!((r.expect(|x| x * x) - 2.0 / gamma(1.0 + 2.0 * a)).abs() < 1e-12);
            let bulk = |g: &dyn Fn(f64) -> f64| r.bulk_atoms().map(|(x, w)| w * g(x)).sum::<f64>();
            assert!((bulk(&|_| 1.0) - 1.0).abs() < 1e-12);
            assert!((bulk(&|x| x * x * x) - 6.0 / gamma(1.0 + 3.0 * a)).abs() < 1e-12);
        }
    }
}
