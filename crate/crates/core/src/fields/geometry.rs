use crate::error::{check_nonneg, check_positive, Error, Result};
use serde::{Deserialize, Serialize};

/// Rectangle (s1, t1] × (s2, t2] in the positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub s1: f64,
    pub t1: f64,
    pub s2: f64,
    pub t2: f64,
}

impl Rect {
    pub fn new(s1: f64, t1: f64, s2: f64, t2: f64) -> Result<Self> {
        for (n, v) in [("s1", s1), ("t1", t1), ("s2", s2), ("t2", t2)] {
            check_nonneg(n, v)?;
        }
        if s1 > t1 || s2 > t2 {
            return Err(Error::invalid(format!(
                "rectangle corners out of order: ({s1},{t1}]x({s2},{t2}]"
            )));
        }
        Ok(Rect { s1, t1, s2, t2 })
    }

    /// [0, t1] × [0, t2].
    pub fn origin(t1: f64, t2: f64) -> Result<Self> {
        Rect::new(0.0, t1, 0.0, t2)
    }

    pub fn area(&self) -> f64 {
        (self.t1 - self.s1) * (self.t2 - self.s2)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.s1 && x <= self.t1 && y > self.s2 && y <= self.t2
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Result<Self> {
        Rect::new(self.s1 + dx, self.t1 + dx, self.s2 + dy, self.t2 + dy)
    }

    pub fn is_disjoint(&self, o: &Rect) -> bool {
        self.t1 <= o.s1 || o.t1 <= self.s1 || self.t2 <= o.s2 || o.t2 <= self.s2
    }
}

/// Uniform node grid on [0, T1] × [0, T2] with n1 × n2 cells.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t1: f64,
    pub t2: f64,
    pub n1: usize,
    pub n2: usize,
}

impl GridSpec {
    pub fn new(t1: f64, t2: f64, n1: usize, n2: usize) -> Result<Self> {
        check_positive("T1", t1)?;
        check_positive("T2", t2)?;
        if n1 == 0 || n2 == 0 {
            return Err(Error::invalid("grid needs at least one cell per axis"));
        }
        Ok(GridSpec { t1, t2, n1, n2 })
    }

    /// Grid over [0, t1] × [0, t2] with spacing close to `h` on both axes.
    pub fn with_step(t1: f64, t2: f64, h: f64) -> Result<Self> {
        check_positive("h", h)?;
        let n1 = (t1 / h).round().max(1.0) as usize;
        let n2 = (t2 / h).round().max(1.0) as usize;
        GridSpec::new(t1, t2, n1, n2)
    }

    pub fn h1(&self) -> f64 {
        self.t1 / self.n1 as f64
    }

    pub fn h2(&self) -> f64 {
        self.t2 / self.n2 as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.h1() * self.h2()
    }

    pub fn x1(&self, i: usize) -> f64 {
        i as f64 * self.h1()
    }

    pub fn x2(&self, j: usize) -> f64 {
        j as f64 * self.h2()
    }

    /// Number of nodes, (n1 + 1)(n2 + 1).
    pub fn nodes(&self) -> usize {
        (self.n1 + 1) * (self.n2 + 1)
    }

    /// Doubles the resolution along both axes.
    pub fn refined(&self) -> Self {
        GridSpec {
            n1: self.n1 * 2,
            n2: self.n2 * 2,
            ..*self
        }
    }
}
