use super::geometry::GridSpec;
use super::rng::{std_normal, stream_rng, FieldRng};
use super::stable::stable_draw;
use crate::error::{check_order, Result};
use crate::io::CsvTable;
use serde::{Deserialize, Serialize};

/// Field values on the (n1 + 1) × (n2 + 1) nodes of a grid, row-major in i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeArray {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl NodeArray {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.grid.n2 + 1) + j]
    }

    /// Value at (T1, T2).
    pub fn corner(&self) -> f64 {
        self.get(self.grid.n1, self.grid.n2)
    }

    /// Nondecreasing along every row and column.
    pub fn is_monotone(&self) -> bool {
        let (n1, n2) = (self.grid.n1, self.grid.n2);
        (0..=n1).all(|i| (1..=n2).all(|j| self.get(i, j) >= self.get(i, j - 1)))
            && (1..=n1).all(|i| (0..=n2).all(|j| self.get(i, j) >= self.get(i - 1, j)))
    }

    pub fn to_csv(&self) -> String {
        let mut t = CsvTable::new(&["t1", "t2", "value"]);
        for i in 0..=self.grid.n1 {
            for j in 0..=self.grid.n2 {
                t.push_reals(&[self.grid.x1(i), self.grid.x2(j), self.get(i, j)]);
            }
        }
        t.render()
    }
}

fn cumulate(grid: &GridSpec, mut cell: impl FnMut() -> f64) -> NodeArray {
    let (n1, n2) = (grid.n1, grid.n2);
    let w = n2 + 1;
    let mut v = vec![0.0; (n1 + 1) * w];
    for i in 1..=n1 {
        let mut row = 0.0;
        for j in 1..=n2 {
            row += cell();
            v[i * w + j] = v[(i - 1) * w + j] + row;
        }
    }
    NodeArray {
        grid: *grid,
        values: v,
    }
}

pub fn brownian_sheet(grid: &GridSpec, rng: &mut FieldRng) -> NodeArray {
    let sd = grid.cell_area().sqrt();
    cumulate(grid, || sd * std_normal(rng))
}

/// Brownian sheet at the nodes from i.i.d. N(0, cell area) increments.
pub fn sample_brownian_sheet(grid: &GridSpec, seed: u64) -> NodeArray {
    brownian_sheet(grid, &mut stream_rng(seed, 0))
}

pub fn stable_sheet(alpha: f64, grid: &GridSpec, rng: &mut FieldRng) -> NodeArray {
    let scale = grid.cell_area().powf(1.0 / alpha);
    cumulate(grid, || scale * stable_draw(alpha, rng))
}

/// Two-parameter α-stable subordinator at the nodes.
pub fn sample_stable_sheet(alpha: f64, grid: &GridSpec, seed: u64) -> Result<NodeArray> {
    check_order("alpha", alpha)?;
    Ok(stable_sheet(alpha, grid, &mut stream_rng(seed, 0)))
}
