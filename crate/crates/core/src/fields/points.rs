use super::geometry::Rect;
use super::rng::{open01, poisson_draw, stream_rng, FieldRng};
use crate::error::{check_nonneg, Result};
use crate::io::CsvTable;
use serde::{Deserialize, Serialize};

/// Planar Poisson points drawn on a rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<(f64, f64)>,
    pub rect: Rect,
    pub lambda: f64,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points inside the half-open rectangle.
    pub fn count_rect(&self, r: &Rect) -> u64 {
        self.points
            .iter()
            .filter(|&&(x, y)| r.contains(x, y))
            .count() as u64
    }

    pub fn to_csv(&self) -> String {
        let mut t = CsvTable::new(&["x", "y"]);
        for &(x, y) in &self.points {
            t.push_reals(&[x, y]);
        }
        t.render()
    }
}

pub fn prf_points(lambda: f64, rect: &Rect, rng: &mut FieldRng) -> PointSet {
    let k = poisson_draw(lambda * rect.area(), rng);
    let (w, h) = (rect.t1 - rect.s1, rect.t2 - rect.s2);
    let points = (0..k)
        .map(|_| {
            let x = rect.t1 - w * open01(rng);
            let y = rect.t2 - h * open01(rng);
            (x, y)
        })
        .collect();
    PointSet {
        points,
        rect: *rect,
        lambda,
    }
}

/// K ~ Poisson(λ·area) uniform points in `rect`.
pub fn sample_prf_points(lambda: f64, rect: &Rect, seed: u64) -> Result<PointSet> {
    check_nonneg("lambda", lambda)?;
    Ok(prf_points(lambda, rect, &mut stream_rng(seed, 0)))
}

/// N(t1, t2): points with x ≤ t1 and y ≤ t2.
pub fn count_in(points: &PointSet, t1: f64, t2: f64) -> u64 {
    points
        .points
        .iter()
        .filter(|&&(x, y)| x <= t1 && y <= t2)
        .count() as u64
}

/// Merge-sort tree over x-sorted points for repeated quadrant counts.
#[derive(Debug, Clone)]
pub struct CountIndex {
    xs: Vec<f64>,
    levels: Vec<Vec<f64>>,
}

impl CountIndex {
    pub fn new(points: &PointSet) -> Self {
        let mut p = points.points.clone();
        p.sort_by(|a, b| a.0.total_cmp(&b.0));
        let xs: Vec<f64> = p.iter().map(|q| q.0).collect();
        let mut levels = vec![p.iter().map(|q| q.1).collect::<Vec<_>>()];
        let mut width = 1;
        while width < xs.len() {
            let prev = levels.last().unwrap();
            let mut next = Vec::with_capacity(prev.len());
            for chunk in prev.chunks(2 * width) {
                let (a, b) = chunk.split_at(width.min(chunk.len()));
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    if j == b.len() || (i < a.len() && a[i] <= b[j]) {
                        next.push(a[i]);
                        i += 1;
                    } else {
                        next.push(b[j]);
                        j += 1;
                    }
                }
            }
            levels.push(next);
            width *= 2;
        }
        CountIndex { xs, levels }
    }

    /// Same value as [`count_in`].
    pub fn count(&self, t1: f64, t2: f64) -> u64 {
        let k = self.xs.partition_point(|&x| x <= t1);
        let mut total = 0usize;
        let mut start = 0usize;
        for (lvl, ys) in self.levels.iter().enumerate().rev() {
            let w = 1usize << lvl;
            if start + w <= k {
                total += ys[start..start + w].partition_point(|&y| y <= t2);
                start += w;
            }
        }
        total as u64
    }
}
