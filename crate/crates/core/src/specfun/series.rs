//! Generic power-series summation with compensated accumulation, a
//! monotone-tail stopping rule and a cancellation guard.

use crate::error::{Error, Result};

/// Double-double style accumulator (Neumaier/TwoSum).
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    hi: f64,
    lo: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    pub fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

impl std::iter::FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut a = Accumulator::new();
        for x in iter {
            a.add(x);
        }
        a
    }
}

/// Compensated sum of an iterator.
pub fn ksum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Accumulator>().value()
}

/// Knobs shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Truncation target for the last admitted term, relative to the
    /// running sum.
    pub tol: f64,
    /// Hard cap on the number of terms.
    pub max_terms: usize,
    /// Largest accepted ratio of estimated rounding error to |sum|.
    pub max_cancellation: f64,
    /// Absolute error below which the cancellation guard never fires.
    pub abs_floor: f64,
    /// Whether cancellation monitoring is active.
    pub alternating_guard: bool,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            tol: 1e-17,
            max_terms: 400,
            max_cancellation: 1e-9,
            abs_floor: 0.0,
            alternating_guard: true,
        }
    }
}

impl SeriesControl {
    pub fn new(tol: f64, max_terms: usize, alternating_guard: bool) -> crate::Result<Self> {
        if tol.is_nan() || tol <= 0.0 || max_terms == 0 {
            return Err(Error::invalid(
                "series control needs tol > 0 and max_terms >= 1",
            ));
        }
        Ok(SeriesControl {
            tol,
            max_terms,
            alternating_guard,
            ..Self::default()
        })
    }

    pub fn unguarded() -> Self {
        SeriesControl {
            alternating_guard: false,
            ..Self::default()
        }
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn with_abs_floor(mut self, f: f64) -> Self {
        self.abs_floor = f;
        self
    }
}

/// One term reported to [`sum_series`].
#[derive(Debug, Clone, Copy)]
pub enum Term {
    /// Value of the term together with the sum of absolute values of the
    /// logarithmic pieces it was assembled from, used to size its rounding
    /// error.
    Value { value: f64, log_scale: f64 },
    /// Term vanishes identically (reciprocal gamma pole, zero factor).
    Zero,
    /// The series terminates: this and all later terms vanish.
    End,
}

impl Term {
    /// Builds a term from its sign and the logarithm of its magnitude.
    pub fn from_log(sign: f64, log_abs: f64, log_scale: f64) -> Term {
        if sign == 0.0 || log_abs == f64::NEG_INFINITY {
            return Term::Zero;
        }
        Term::Value {
            value: sign * log_abs.exp(),
            log_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: usize,
    /// Estimated absolute rounding plus truncation error.
    pub error: f64,
    /// Largest |term| seen.
    pub max_term: f64,
}

const EPS: f64 = f64::EPSILON;

/// Sums `term(k)` for k = 0, 1, ....
///
/// Stops once three consecutive non-zero terms are below `tol * |sum|` and
/// the latest is smaller than its predecessor.
pub fn sum_series<F>(op: &'static str, ctrl: &SeriesControl, mut term: F) -> Result<SeriesSum>
where
    F: FnMut(usize) -> Result<Term>,
{
    let mut acc = Accumulator::new();
    let mut err = 0.0_f64;
    let mut max_term = 0.0_f64;
    let mut prev = f64::INFINITY;
    let mut streak = 0usize;
    let mut small = 0usize;
    let mut k = 0usize;
    loop {
        if k >= ctrl.max_terms {
            return Err(Error::NonConvergence { op, terms: k });
        }
        match term(k)? {
            Term::End => {
                k += 1;
                break;
            }
            Term::Zero => {}
            Term::Value { value, log_scale } => {
                if !value.is_finite() {
                    return Err(Error::Overflow { op, term: k });
                }
                let a = value.abs();
                acc.add(value);
                err += a * EPS * (2.0 + 2.0 * log_scale);
                max_term = max_term.max(a);
                if a < prev {
                    streak += 1;
                } else {
                    streak = 0;
                }
                prev = a;
                let s = acc.value().abs();
                if a <= ctrl.tol * s || (s == 0.0 && a < 1e-300) {
                    small += 1;
                } else {
                    small = 0;
                }
                if streak >= 1 && small >= 3 {
                    k += 1;
                    break;
                }
            }
        }
        k += 1;
    }
    let value = acc.value();
    let total_err = err + EPS * value.abs();
    if ctrl.alternating_guard
        && total_err > ctrl.max_cancellation * value.abs()
        && total_err > ctrl.abs_floor
    {
        return Err(Error::Cancellation {
            op,
            estimate: total_err,
            value,
        });
    }
    Ok(SeriesSum {
        value,
        terms: k,
        error: total_err,
        max_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accumulator_recovers_lost_bits() {
        let mut a = Accumulator::new();
        a.add(1e16);
        for _ in 0..10 {
            a.add(1.0);
        }
        a.add(-1e16);
        assert_eq!(a.value(), 10.0);
    }

    #[test]
    fn exp_series() {
        let r = sum_series("exp", &SeriesControl::default(), |k| {
            let lf = crate::specfun::gamma::ln_factorial(k as u64);
            Ok(Term::from_log(1.0, k as f64 * 2.0f64.ln() - lf, lf))
        })
        .unwrap();
        assert!((r.value - 2.0f64.exp()).abs() < 1e-15 * 2.0f64.exp());
    }

    #[test]
    fn guard_fires_on_catastrophic_alternation() {
        let x: f64 = 40.0;
        let r = sum_series("exp", &SeriesControl::default(), |k| {
            let lf = crate::specfun::gamma::ln_factorial(k as u64);
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            Ok(Term::from_log(s, k as f64 * x.ln() - lf, lf))
        });
        assert!(matches!(r, Err(Error::Cancellation { .. })));
    }

    #[test]
    fn cap_reports_nonconvergence() {
        let r = sum_series(
            "harmonic",
            &SeriesControl::default().with_max_terms(50),
            |k| {
                Ok(Term::Value {
                    value: 1.0 / (k as f64 + 1.0),
                    log_scale: 0.0,
                })
            },
        );
        assert!(matches!(r, Err(Error::NonConvergence { terms: 50, .. })));
    }
}
