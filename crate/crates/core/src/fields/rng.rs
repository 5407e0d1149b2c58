use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Exp1, Open01, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub type FieldRng = ChaCha12Rng;

/// Generator for replication `stream` under `seed`. Streams never overlap.
pub fn stream_rng(seed: u64, stream: u64) -> FieldRng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

pub fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

pub fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Poisson draw that tolerates any non-negative mean.
///
/// Means above 1e12 use the normal approximation; an infinite mean saturates.
pub fn poisson_draw<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean.is_nan() || mean <= 0.0 {
        return 0;
    }
    if !mean.is_finite() {
        return u64::MAX;
    }
    if mean > 1e12 {
        let v = (mean + mean.sqrt() * std_normal(rng)).round();
        return if v <= 0.0 {
            0
        } else if v >= u64::MAX as f64 {
            u64::MAX
        } else {
            v as u64
        };
    }
    let d = Poisson::new(mean).expect("finite positive mean");
    d.sample(rng) as u64
}

/// Replicated draws of a scalar observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub seed: u64,
    pub descriptor: String,
    pub values: Vec<f64>,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        crate::specfun::series::ksum(self.values.iter().copied()) / self.values.len() as f64
    }

    /// Values as counts; panics on non-integral entries.
    pub fn counts(&self) -> Vec<u64> {
        self.values
            .iter()
            .map(|&v| {
                assert!(v >= 0.0 && v.fract() == 0.0, "not a count: {v}");
                v as u64
            })
            .collect()
    }
}

/// Runs `f` once per replication, replication `i` on stream `i`.
///
/// Output order and values do not depend on the thread pool.
pub fn replicate<T, F>(seed: u64, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut FieldRng) -> T + Sync,
{
    (0..n as u64)
        .into_par_iter()
        .map(|i| f(&mut stream_rng(seed, i)))
        .collect()
}

pub fn sample_batch<F>(seed: u64, n: usize, descriptor: impl Into<String>, f: F) -> SampleBatch
where
    F: Fn(&mut FieldRng) -> f64 + Sync,
{
    SampleBatch {
        seed,
        descriptor: descriptor.into(),
        values: replicate(seed, n, f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| stream_rng(7, 3).random()).collect();
        assert_eq!(a, b);
        let x: u64 = stream_rng(7, 3).random();
        let y: u64 = stream_rng(7, 4).random();
        assert_ne!(x, y);
    }

    #[test]
    fn batch_independent_of_thread_count() {
        let f = |r: &mut FieldRng| exp1(r);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_batch(11, 5000, "e", f));
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| sample_batch(11, 5000, "e", f));
        assert_eq!(one, many);
    }

    #[test]
    fn poisson_edge_means() {
        let mut r = stream_rng(1, 0);
        assert_eq!(poisson_draw(0.0, &mut r), 0);
        assert_eq!(poisson_draw(f64::INFINITY, &mut r), u64::MAX);
        let big = poisson_draw(1e14, &mut r) as f64;
        assert!((big - 1e14).abs() < 1e8);
    }
}
