use super::rng::{poisson_draw, std_normal, FieldRng};
use super::stable::{inverse_stable_draw, ln_stable_draw};
use crate::dists::FieldParams;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Scaled normal compound fields whose one-point laws converge as n → ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitVariant {
    /// n^{−1} Σ_{j ≤ N(n t1, n t2)} Z_j with a unit-rate PRF.
    GaussianSheet,
    /// n^{−1/2} Σ_{j ≤ N_{α,1}(t1, n t2)} Z_j.
    TcOneAxis,
    /// n^{−1} Σ over a time-fractional field of rate n².
    TcTwoAxis,
    /// n^{−1} Σ over a space-time fractional field of rate n².
    StfCompound,
    /// `StfCompound` at β = 1.
    ProductTc,
}

impl LimitVariant {
    pub const ALL: [LimitVariant; 5] = [
        LimitVariant::GaussianSheet,
        LimitVariant::TcOneAxis,
        LimitVariant::TcTwoAxis,
        LimitVariant::StfCompound,
        LimitVariant::ProductTc,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LimitVariant::GaussianSheet => "gaussian_sheet",
            LimitVariant::TcOneAxis => "tc_one_axis",
            LimitVariant::TcTwoAxis => "tc_two_axis",
            LimitVariant::StfCompound => "stf_compound",
            LimitVariant::ProductTc => "product_tc",
        }
    }
}

impl fmt::Display for LimitVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LimitVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown limit variant '{s}'")))
    }
}

/// One draw of the scaled field at (t1, t2) and scale n.
///
/// A sum of K standard normals is drawn as √K·Z. Only the orders of `p` are read.
pub fn scaled_draw(
    v: LimitVariant,
    p: &FieldParams,
    n: f64,
    t1: f64,
    t2: f64,
    rng: &mut FieldRng,
) -> f64 {
    let n2 = n * n;
    let (k, norm) = match v {
        LimitVariant::GaussianSheet => (poisson_draw(n2 * t1 * t2, rng), n),
        LimitVariant::TcOneAxis => {
            let l = inverse_stable_draw(p.alpha1, t1, rng);
            (poisson_draw(l * n * t2, rng), n.sqrt())
        }
        LimitVariant::TcTwoAxis => {
            let l = inverse_stable_draw(p.alpha1, t1, rng) * inverse_stable_draw(p.alpha2, t2, rng);
            (poisson_draw(n2 * l, rng), n)
        }
        LimitVariant::StfCompound | LimitVariant::ProductTc => {
            let beta = if v == LimitVariant::ProductTc {
                1.0
            } else {
                p.beta
            };
            let l = inverse_stable_draw(p.alpha1, t1, rng) * inverse_stable_draw(p.alpha2, t2, rng);
            let h = if l == 0.0 {
                0.0
            } else {
                (l.ln() / beta + ln_stable_draw(beta, rng)).exp()
            };
            (poisson_draw(n2 * h, rng), n)
        }
    };
    (k as f64).sqrt() * std_normal(rng) / norm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::rng::replicate;

    #[test]
    fn names_round_trip() {
        for v in LimitVariant::ALL {
            assert_eq!(v.name().parse::<LimitVariant>().unwrap(), v);
        }
        assert!("sheet".parse::<LimitVariant>().is_err());
    }

    #[test]
    fn gaussian_sheet_variance() {
        let p = FieldParams::poisson(1.0).unwrap();
        let n = 50_000;
        let v = replicate(1, n, |r| {
            scaled_draw(LimitVariant::GaussianSheet, &p, 20.0, 1.0, 2.0, r)
        });
        let var = v.iter().map(|x| x * x).sum::<f64>() / n as f64;
        assert!((var - 2.0).abs() < 4.0 * (8.0 / n as f64).sqrt(), "{var}");
    }
}
