use crate::error::{Error, Result};
use crate::io::CsvTable;
use serde::{Deserialize, Serialize};

/// Residuals of a governing equation on a rectangular window of grid nodes.
///
/// `values[s]` holds the residual of state `states[s]` at node (i, j),
/// stored at `i * coords2.len() + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub label: String,
    pub axes: [String; 2],
    pub h: f64,
    pub coords1: Vec<f64>,
    pub coords2: Vec<f64>,
    pub states: Vec<u64>,
    pub values: Vec<Vec<f64>>,
    pub norm: f64,
}

impl ResidualGrid {
    pub(crate) fn new(
        label: impl Into<String>,
        axes: [&str; 2],
        h: f64,
        coords1: Vec<f64>,
        coords2: Vec<f64>,
        states: Vec<u64>,
        values: Vec<Vec<f64>>,
    ) -> Self {
        let mut g = ResidualGrid {
            label: label.into(),
            axes: [axes[0].to_string(), axes[1].to_string()],
            h,
            coords1,
            coords2,
            states,
            values,
            norm: 0.0,
        };
        g.norm = g.recompute_norm();
        g
    }

    /// Max |residual| over all stored nodes and states.
    pub fn recompute_norm(&self) -> f64 {
        self.values.iter().flatten().fold(0.0f64, |m, v| {
            if v.is_nan() {
                f64::NAN
            } else {
                m.max(v.abs())
            }
        })
    }

    pub fn state_norm(&self, s: usize) -> f64 {
        self.values[s].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn get(&self, s: usize, i: usize, j: usize) -> f64 {
        self.values[s][i * self.coords2.len() + j]
    }

    pub fn to_csv(&self) -> String {
        let mut t = CsvTable::new(&[
            self.axes[0].as_str(),
            self.axes[1].as_str(),
            "state",
            "residual",
        ]);
        for (s, &n) in self.states.iter().enumerate() {
            for (i, &a) in self.coords1.iter().enumerate() {
                for (j, &b) in self.coords2.iter().enumerate() {
                    t.push(vec![
                        crate::io::fmt_real(a),
                        crate::io::fmt_real(b),
                        n.to_string(),
                        crate::io::fmt_real(self.get(s, i, j)),
                    ]);
                }
            }
        }
        t.render()
    }
}

/// Residual norms over successive halvings of the step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub steps: Vec<f64>,
    pub norms: Vec<f64>,
}

impl Refinement {
    /// norm(h) / norm(h/2) for each halving.
    pub fn ratios(&self) -> Vec<f64> {
        self.norms.windows(2).map(|w| w[0] / w[1]).collect()
    }

    /// log2 of the ratios.
    pub fn orders(&self) -> Vec<f64> {
        self.ratios().iter().map(|r| r.log2()).collect()
    }

    pub fn min_ratio(&self) -> f64 {
        self.ratios().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Runs `f` at h, h/2, ..., h/2^halvings.
pub fn refinement_study<F>(h: f64, halvings: usize, mut f: F) -> Result<Refinement>
where
    F: FnMut(f64) -> Result<ResidualGrid>,
{
    if halvings == 0 {
        return Err(Error::invalid("refinement needs at least one halving"));
    }
    let mut steps = Vec::new();
    let mut norms = Vec::new();
    for k in 0..=halvings {
        let hk = h / f64::powi(2.0, k as i32);
        steps.push(hk);
        norms.push(f(hk)?.norm);
    }
    Ok(Refinement { steps, norms })
}
