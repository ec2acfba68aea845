use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};

/// Axis-aligned box in chart coordinates, half-open [lo, hi) per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl CoordBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(FrameError::DimensionMismatch { expected: lo.len(), got: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(FrameError::InvalidSpec(format!("empty coordinate box {lo:?}..{hi:?}")));
        }
        Ok(CoordBox { lo, hi })
    }

    /// Max-norm ball of the given radius around 0.
    pub fn symmetric(dim: usize, radius: f64) -> Self {
        CoordBox { lo: vec![-radius; dim], hi: vec![radius; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn width(&self, k: usize) -> f64 {
        self.hi[k] - self.lo[k]
    }

    /// Half-open membership.
    pub fn contains(&self, t: &[f64]) -> bool {
        t.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| *x >= *a && *x < *b)
    }

    /// Closed membership with an absolute slack.
    pub fn contains_closed(&self, t: &[f64], slack: f64) -> bool {
        t.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (a, b))| *x >= *a - slack && *x <= *b + slack)
    }

    /// Shrinks each side by `pad` (relative to the width).
    pub fn shrink(&self, pad: f64) -> Self {
        let lo = (0..self.dim()).map(|k| self.lo[k] + pad * self.width(k)).collect();
        let hi = (0..self.dim()).map(|k| self.hi[k] - pad * self.width(k)).collect();
        CoordBox { lo, hi }
    }

    pub fn translate(&self, by: &[f64]) -> Self {
        CoordBox {
            lo: self.lo.iter().zip(by).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(by).map(|(a, b)| a + b).collect(),
        }
    }

    /// Closed tensor grid with `m` points per axis (corners included).
    pub fn grid(&self, m: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|k| {
                if m <= 1 {
                    vec![0.5 * (self.lo[k] + self.hi[k])]
                } else {
                    (0..m).map(|i| self.lo[k] + self.width(k) * i as f64 / (m - 1) as f64).collect()
                }
            })
            .collect();
        tensor(&axes)
    }

    /// Cell-centred grid with `m` points per axis (strictly inside).
    pub fn interior_grid(&self, m: usize) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = (0..self.dim())
            .map(|k| (0..m).map(|i| self.lo[k] + self.width(k) * (i as f64 + 0.5) / m as f64).collect())
            .collect();
        tensor(&axes)
    }
}

pub(crate) fn tensor(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for ax in axes {
        let mut next = Vec::with_capacity(out.len() * ax.len());
        for p in &out {
            for &x in ax {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
