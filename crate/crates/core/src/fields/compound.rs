use super::geometry::Rect;
use super::points::PointSet;
use super::rng::{exp1, std_normal, stream_rng, FieldRng};
use super::stable::ln_stable_draw;
use crate::dists::{CompoundKind, CompoundParams};
use crate::io::CsvTable;
use crate::specfun::series::ksum;
use serde::{Deserialize, Serialize};

/// One mark. Mittag-Leffler marks use Y = σ^{−1/β} W^{1/β} S_β with W ~ Exp(1).
pub fn mark_draw(c: &CompoundParams, rng: &mut FieldRng) -> f64 {
    match c.kind {
        CompoundKind::Normal => std_normal(rng),
        CompoundKind::Exponential => exp1(rng) / c.sigma,
        CompoundKind::MittagLeffler => {
            let b = c.beta_c;
            if b == 1.0 {
                return exp1(rng) / c.sigma;
            }
            let w = exp1(rng);
            ((w.ln() - c.sigma.ln()) / b + ln_stable_draw(b, rng)).exp()
        }
    }
}

/// Marked points; evaluates X(t1, t2) = sum of marks in [0, t1] × [0, t2].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundField {
    pub points: PointSet,
    pub marks: Vec<f64>,
}

impl CompoundField {
    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        ksum(
            self.points
                .points
                .iter()
                .zip(&self.marks)
                .filter(|((x, y), _)| *x <= t1 && *y <= t2)
                .map(|(_, &m)| m),
        )
    }

    /// Sum of marks strictly inside (s1, t1] × (s2, t2].
    pub fn increment(&self, r: &Rect) -> f64 {
        ksum(
            self.points
                .points
                .iter()
                .zip(&self.marks)
                .filter(|((x, y), _)| r.contains(*x, *y))
                .map(|(_, &m)| m),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut t = CsvTable::new(&["x", "y", "mark"]);
        for (&(x, y), &m) in self.points.points.iter().zip(&self.marks) {
            t.push_reals(&[x, y, m]);
        }
        t.render()
    }
}

pub fn cprf(points: &PointSet, c: &CompoundParams, rng: &mut FieldRng) -> CompoundField {
    let marks = (0..points.len()).map(|_| mark_draw(c, rng)).collect();
    CompoundField {
        points: points.clone(),
        marks,
    }
}

/// Attaches i.i.d. marks (stream 0 of `seed`) to `points`.
pub fn sample_cprf(points: &PointSet, compounding: &CompoundParams, seed: u64) -> CompoundField {
    cprf(points, compounding, &mut stream_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::points::{prf_points, sample_prf_points};
    use crate::fields::rng::replicate;

    #[test]
    fn no_points_is_zero() {
        let p = sample_prf_points(0.0, &Rect::origin(1.0, 1.0).unwrap(), 1).unwrap();
        let f = sample_cprf(&p, &CompoundParams::normal(), 1);
        assert_eq!(f.eval(1.0, 1.0), 0.0);
    }

    #[test]
    fn variance_is_area() {
        let r = Rect::origin(1.0, 1.0).unwrap();
        let n = 100_000;
        let v = replicate(3, n, |g| {
            let p = prf_points(1.0, &r, g);
            cprf(&p, &CompoundParams::normal(), g).eval(1.0, 1.0)
        });
        let m2 = v.iter().map(|x| x * x).sum::<f64>() / n as f64;
        // Var X² = 3 E N² − 1 = 5.
        assert!((m2 - 1.0).abs() < 3.0 * (5.0 / n as f64).sqrt(), "{m2}");
    }

    #[test]
    fn rectangular_increment_telescopes() {
        let p = sample_prf_points(4.0, &Rect::origin(3.0, 3.0).unwrap(), 17).unwrap();
        let f = sample_cprf(&p, &CompoundParams::exponential(2.0).unwrap(), 17);
        let (s1, t1, s2, t2) = (0.7, 2.2, 1.1, 2.9);
        let d = f.eval(t1, t2) - f.eval(s1, t2) - f.eval(t1, s2) + f.eval(s1, s2);
        let inc = f.increment(&Rect::new(s1, t1, s2, t2).unwrap());
        assert!((d - inc).abs() < 1e-12);
    }

    #[test]
    fn ml_mark_laplace() {
        let c = CompoundParams::mittag_leffler(1.0, 0.5).unwrap();
        let n = 100_000;
        let v = replicate(12, n, |g| (-mark_draw(&c, g)).exp());
        let m = v.iter().sum::<f64>() / n as f64;
        assert!(
            (m - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt() + 1e-4,
            "{m}"
        );
    }

    #[test]
    fn ml_mark_order_one_is_exponential() {
        let a = CompoundParams::mittag_leffler(2.0, 1.0).unwrap();
        let b = CompoundParams::exponential(2.0).unwrap();
        let x = mark_draw(&a, &mut stream_rng(5, 0));
        let y = mark_draw(&b, &mut stream_rng(5, 0));
        assert_eq!(x, y);
    }
}
