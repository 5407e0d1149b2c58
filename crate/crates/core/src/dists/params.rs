use crate::error::{check_order, check_positive, Result};
use serde::{Deserialize, Serialize};

/// Rate and fractional orders of a count field.
///
/// `(alpha1, alpha2, beta) = (1, 1, 1)` is the plain Poisson random field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub lambda: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
}

impl FieldParams {
    pub fn new(lambda: f64, alpha1: f64, alpha2: f64, beta: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_order("alpha1", alpha1)?;
        check_order("alpha2", alpha2)?;
        check_order("beta", beta)?;
        Ok(FieldParams {
            lambda,
            alpha1,
            alpha2,
            beta,
        })
    }

    pub fn poisson(lambda: f64) -> Result<Self> {
        Self::new(lambda, 1.0, 1.0, 1.0)
    }

    pub fn time_fractional(lambda: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(lambda, alpha1, alpha2, 1.0)
    }

    pub fn space_fractional(lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(lambda, 1.0, 1.0, alpha)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.lambda, self.alpha1, self.alpha2, self.beta).map(|_| ())
    }

    /// t1^α1 t2^α2.
    pub fn time_scale(&self, t1: f64, t2: f64) -> f64 {
        t1.powf(self.alpha1) * t2.powf(self.alpha2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompoundKind {
    Normal,
    Exponential,
    MittagLeffler,
}

/// Mark law of a compound field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompoundParams {
    pub kind: CompoundKind,
    pub sigma: f64,
    pub beta_c: f64,
}

impl CompoundParams {
    pub fn normal() -> Self {
        CompoundParams {
            kind: CompoundKind::Normal,
            sigma: 1.0,
            beta_c: 1.0,
        }
    }

    pub fn exponential(sigma: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        Ok(CompoundParams {
            kind: CompoundKind::Exponential,
            sigma,
            beta_c: 1.0,
        })
    }

    pub fn mittag_leffler(sigma: f64, beta_c: f64) -> Result<Self> {
        check_positive("sigma", sigma)?;
        check_order("beta_c", beta_c)?;
        Ok(CompoundParams {
            kind: CompoundKind::MittagLeffler,
            sigma,
            beta_c,
        })
    }
}
