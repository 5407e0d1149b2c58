use crate::fields::rng::{stream_rng, SampleBatch};
use crate::specfun::series::ksum;
use num_complex::Complex64;
use rand_distr::{Binomial, Distribution};
use std::collections::BTreeMap;

/// Relative frequencies of a count sample, kept as exact counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalPmf {
    pub counts: BTreeMap<u64, u64>,
    pub n: u64,
}

impl EmpiricalPmf {
    pub fn prob(&self, k: u64) -> f64 {
        self.counts
            .get(&k)
            .map_or(0.0, |&c| c as f64 / self.n as f64)
    }

    /// Frequencies of {0}, ..., {n_max}, {> n_max}; the overflow is counted, not subtracted.
    pub fn binned(&self, n_max: usize) -> Vec<f64> {
        let mut c = vec![0u64; n_max + 2];
        for (&k, &m) in &self.counts {
            let idx = if k as u128 > n_max as u128 {
                n_max + 1
            } else {
                k as usize
            };
            c[idx] += m;
        }
        c.iter().map(|&m| m as f64 / self.n as f64).collect()
    }

    /// Frequencies on the observed support.
    pub fn to_map(&self) -> BTreeMap<u64, f64> {
        self.counts.keys().map(|&k| (k, self.prob(k))).collect()
    }
}

pub fn empirical_pmf_counts(values: &[u64]) -> EmpiricalPmf {
    let mut counts = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    EmpiricalPmf {
        counts,
        n: values.len() as u64,
    }
}

pub fn empirical_pmf(batch: &SampleBatch) -> EmpiricalPmf {
    empirical_pmf_counts(&batch.counts())
}

/// ½ Σ |p − q|, shorter vector padded with zeros.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * ksum((0..n).map(|i| (get(p, i) - get(q, i)).abs()))
}

/// TV on maps keyed by value, over the union of supports.
pub fn tv_distance_maps(p: &BTreeMap<u64, f64>, q: &BTreeMap<u64, f64>) -> f64 {
    let keys: std::collections::BTreeSet<u64> = p.keys().chain(q.keys()).copied().collect();
    let g = |m: &BTreeMap<u64, f64>, k: u64| m.get(&k).copied().unwrap_or(0.0);
    0.5 * ksum(keys.into_iter().map(|k| (g(p, k) - g(q, k)).abs()))
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// sup |F_n − F| over the sample, ties handled per distinct value.
pub fn ks_statistic<F: Fn(f64) -> f64>(values: &[f64], cdf: F) -> f64 {
    let v = sorted(values);
    let n = v.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d
            .max((f - i as f64 / n).abs())
            .max((j as f64 / n - f).abs());
        i = j;
    }
    d
}

pub fn ks_batch<F: Fn(f64) -> f64>(batch: &SampleBatch, cdf: F) -> f64 {
    ks_statistic(&batch.values, cdf)
}

/// Two-sample sup |F_a − F_b|.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// 1% critical value of the one-sample statistic.
pub fn ks_critical(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

pub fn ks_critical_two_sample(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.63 * ((n + m) / (n * m)).sqrt()
}

/// (1/n) Σ e^{iuX} at each u.
pub fn empirical_cf(values: &[f64], u_grid: &[f64]) -> Vec<Complex64> {
    let n = values.len() as f64;
    u_grid
        .iter()
        .map(|&u| {
            let re = ksum(values.iter().map(|&x| (u * x).cos()));
            let im = ksum(values.iter().map(|&x| (u * x).sin()));
            Complex64::new(re / n, im / n)
        })
        .collect()
}

pub const DEFAULT_U_GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// Null distribution of TV(empirical, p) at sample size n by multinomial resampling.
///
/// Returns the sorted statistics of `reps` replicates.
pub fn tv_null_distribution(p: &[f64], n: usize, reps: usize, seed: u64) -> Vec<f64> {
    let total = ksum(p.iter().copied());
    let mut out: Vec<f64> = (0..reps as u64)
        .map(|r| {
            let mut rng = stream_rng(seed, r);
            let mut left = n as u64;
            let mut mass = total;
            let mut freq = Vec::with_capacity(p.len());
            for &pi in p {
                let k = if left == 0 || mass <= 0.0 {
                    0
                } else {
                    let q = (pi / mass).clamp(0.0, 1.0);
                    Binomial::new(left, q)
                        .expect("valid binomial")
                        .sample(&mut rng)
                };
                left -= k;
                mass -= pi;
                freq.push(k as f64 / n as f64);
            }
            tv_distance(&freq, p)
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Empirical quantile of sorted data, upper order statistic.
pub fn upper_quantile(sorted: &[f64], q: f64) -> f64 {
    let k = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

pub fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = ksum(v.iter().copied()) / n;
    let var = ksum(v.iter().map(|x| (x - m) * (x - m))) / (n - 1.0);
    (m, (var / n).sqrt())
}

pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = ksum(a.iter().copied()) / n;
    let mb = ksum(b.iter().copied()) / n;
    let sab = ksum(a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)));
    let saa = ksum(a.iter().map(|x| (x - ma) * (x - ma)));
    let sbb = ksum(b.iter().map(|y| (y - mb) * (y - mb)));
    if saa == 0.0 || sbb == 0.0 {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}
