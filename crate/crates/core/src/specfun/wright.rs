//! Generalized Fox-Wright function mΨl.

use super::gamma::ln_gamma_signed;
use super::series::{sum_series, SeriesControl, SeriesSum, Term};
use crate::error::{check_finite, Error, Result};

/// Parameter rows of mΨl: upper pairs (a_i, α_i) and lower pairs (b_j, β_j).
#[derive(Debug, Clone, PartialEq)]
pub struct WrightSpec {
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

/// Radius of convergence of a Fox-Wright series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convergence {
    Entire,
    Radius(f64),
    Divergent,
}

impl WrightSpec {
    pub fn new(upper: Vec<(f64, f64)>, lower: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, al) in upper.iter().chain(lower.iter()) {
            check_finite("Wright parameter", a)?;
            check_finite("Wright parameter", al)?;
            if al == 0.0 {
                return Err(Error::invalid("Wright step parameters must be nonzero"));
            }
        }
        Ok(WrightSpec { upper, lower })
    }

    /// Δ = Σβ_j − Σα_i.
    pub fn delta(&self) -> f64 {
        self.lower.iter().map(|p| p.1).sum::<f64>() - self.upper.iter().map(|p| p.1).sum::<f64>()
    }

    pub fn convergence(&self) -> Convergence {
        let d = self.delta();
        if d > -1.0 + 1e-12 {
            Convergence::Entire
        } else if d < -1.0 - 1e-12 {
            Convergence::Divergent
        } else {
            let lr = self
                .upper
                .iter()
                .map(|p| -p.1 * p.1.abs().ln())
                .sum::<f64>()
                + self.lower.iter().map(|p| p.1 * p.1.abs().ln()).sum::<f64>();
            Convergence::Radius(lr.exp())
        }
    }
}

/// Σ_n Π Γ(a_i+α_i n) / Π Γ(b_j+β_j n) · x^n/n!.
pub fn wright(spec: &WrightSpec, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    wright_detailed(spec, x, ctrl).map(|s| s.value)
}

pub fn wright_detailed(spec: &WrightSpec, x: f64, ctrl: &SeriesControl) -> Result<SeriesSum> {
    check_finite("x", x)?;
    if x != 0.0 {
        match spec.convergence() {
            Convergence::Entire => {}
            Convergence::Radius(r) if x.abs() < r => {}
            Convergence::Radius(r) => {
                return Err(Error::Divergent {
                    op: "wright",
                    detail: format!("|x| = {} outside radius {}", x.abs(), r),
                })
            }
            Convergence::Divergent => {
                return Err(Error::Divergent {
                    op: "wright",
                    detail: format!("delta = {} < -1", spec.delta()),
                })
            }
        }
    }
    let lx = if x == 0.0 { 0.0 } else { x.abs().ln() };
    let sx = x.signum();
    let mut log_fact = 0.0;
    sum_series("wright", ctrl, |n| {
        if n > 0 {
            if x == 0.0 {
                return Ok(Term::End);
            }
            log_fact += (n as f64).ln();
        }
        let nf = n as f64;
        let mut l = 0.0;
        let mut scale = log_fact;
        let mut sign = 1.0;
        for &(a, al) in &spec.upper {
            let arg = a + al * nf;
            let (lg, sg) = ln_gamma_signed(arg);
            if sg == 0.0 {
                return Err(Error::GammaPole {
                    op: "wright",
                    at: arg,
                });
            }
            l += lg;
            scale += lg.abs();
            sign *= sg;
        }
        for &(b, be) in &spec.lower {
            let (lg, sg) = ln_gamma_signed(b + be * nf);
            if sg == 0.0 {
                return Ok(Term::Zero);
            }
            l -= lg;
            scale += lg.abs();
            sign *= sg;
        }
        let kx = nf * lx;
        if n % 2 == 1 {
            sign *= sx;
        }
        Ok(Term::from_log(sign, l + kx - log_fact, scale + kx.abs()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::mittag_leffler::ml3;

    #[test]
    fn matches_mittag_leffler() {
        // 1Ψ1[(γ,1);(β,α) | x] = Γ(γ) E^γ_{α,β}(x).
        let s = WrightSpec::new(vec![(1.5, 1.0)], vec![(0.8, 0.6)]).unwrap();
        let c = SeriesControl::default();
        let w = wright(&s, -1.2, &c).unwrap();
        let m = ml3(0.6, 0.8, 1.5, -1.2, &c).unwrap();
        assert!((w - crate::specfun::gamma::gamma(1.5) * m).abs() < 1e-14);
    }

    #[test]
    fn convergence_classes() {
        let s =
            WrightSpec::new(vec![(1.0, 1.0), (1.0, 1.0)], vec![(1.0, 0.5), (1.0, 0.5)]).unwrap();
        assert_eq!(s.convergence(), Convergence::Radius(0.5));
        let s =
            WrightSpec::new(vec![(1.0, 1.0), (1.0, 1.0)], vec![(1.0, 0.4), (1.0, 0.5)]).unwrap();
        assert_eq!(s.convergence(), Convergence::Divergent);
        assert!(wright(&s, 0.1, &SeriesControl::default()).is_err());
        assert_eq!(wright(&s, 0.0, &SeriesControl::default()).unwrap(), 1.0);
    }

    #[test]
    fn numerator_pole_fails() {
        let s = WrightSpec::new(vec![(-2.0, 1.0)], vec![(1.0, 1.0)]).unwrap();
        assert!(matches!(
            wright(&s, 0.5, &SeriesControl::default()),
            Err(Error::GammaPole { .. })
        ));
    }
}
