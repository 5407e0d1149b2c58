//! Characteristic functions of the unit-rate compound field with standard
//! normal marks.

use crate::fields::geometry::Rect;
use num_complex::Complex64;

/// E e^{iuX(R)} = exp(|R| (e^{−u²/2} − 1)).
pub fn normal_cprf_cf(u: f64, rect: &Rect) -> Complex64 {
    Complex64::new((rect.area() * ((-0.5 * u * u).exp() - 1.0)).exp(), 0.0)
}

/// Joint characteristic function E e^{i(uX(p1) + vX(p2))} of the field at
/// two points p = (s, t).
///
/// The two quadrants share [0, s1∧s2] × [0, t1∧t2]; the rest of each is
/// disjoint from the other, which covers every relative position of the
/// points.
pub fn normal_cprf_joint_cf(u: f64, v: f64, p1: (f64, f64), p2: (f64, f64)) -> Complex64 {
    let shared = p1.0.min(p2.0) * p1.1.min(p2.1);
    let a1 = p1.0 * p1.1 - shared;
    let a2 = p2.0 * p2.1 - shared;
    let g = |w: f64| (-0.5 * w * w).exp() - 1.0;
    Complex64::new((shared * g(u + v) + a1 * g(u) + a2 * g(v)).exp(), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_case_matches_two_region_form() {
        let (s1, t1, s2, t2) = (1.0, 1.0, 2.0, 2.0);
        let (u, v): (f64, f64) = (0.7, -0.4);
        let g = |w: f64| (-0.5 * w * w).exp() - 1.0;
        let expect = (s1 * t1 * g(u + v) + (s2 * t2 - s1 * t1) * g(v)).exp();
        assert!((normal_cprf_joint_cf(u, v, (s1, t1), (s2, t2)).re - expect).abs() < 1e-15);
    }

    #[test]
    fn mixed_moment_is_min_min() {
        // −∂²/∂u∂v at the origin.
        let h = 1e-4;
        for &(p1, p2) in &[((1.0, 2.0), (2.0, 1.0)), ((1.0, 1.0), (2.0, 2.0))] {
            let f = |u, v| normal_cprf_joint_cf(u, v, p1, p2).re;
            let d = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
            let target = f64::min(p1.0, p2.0) * f64::min(p1.1, p2.1);
            assert!((-d - target).abs() < 1e-6);
        }
    }
}
