use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coadjoint::ThetaChart;
use crate::quadrature::TensorRule;
use crate::sampling::CoordBox;

pub const SAFETY_FACTOR: f64 = 1.001;
const REFINE_TOL: f64 = 1e-6;
const MAX_GRID_POINTS: usize = 300_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxKind {
    /// The cube contains the image of the chart.
    Containing,
    /// The image is a fundamental domain of the dual lattice (the cube only fixes the period).
    FundamentalDomain,
}

/// Frequency cube C = center + [-ς, ς)^r and the dual lattice Γ_N = (1/2ς) Z^r on the J axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyBox {
    pub half_width: f64,
    pub center: Vec<f64>,
    pub kind: BoxKind,
    /// max ‖Θ‖_max seen on the refined grid (0 for prescribed boxes).
    pub grid_max: f64,
}

impl FrequencyBox {
    pub fn prescribed(half_width: f64, center: Vec<f64>, kind: BoxKind) -> Self {
        FrequencyBox { half_width, center, kind, grid_max: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// |C| = (2ς)^r.
    pub fn volume(&self) -> f64 {
        (2.0 * self.half_width).powi(self.dim() as i32)
    }

    /// Lattice spacing 1/(2ς).
    pub fn spacing(&self) -> f64 {
        1.0 / (2.0 * self.half_width)
    }

    pub fn cube(&self) -> CoordBox {
        CoordBox {
            lo: self.center.iter().map(|c| c - self.half_width).collect(),
            hi: self.center.iter().map(|c| c + self.half_width).collect(),
        }
    }

    /// Largest amount by which Θ(grid) leaves the cube (≤ 0 means contained).
    pub fn containment_excess(&self, chart: &ThetaChart, m: usize) -> f64 {
        let mut excess = f64::NEG_INFINITY;
        for t in chart.domain().grid(m) {
            let xi = chart.theta(&t);
            for (x, c) in xi.iter().zip(&self.center) {
                excess = excess.max((x - c).abs() - self.half_width);
            }
        }
        excess
    }
}

/// ς from the grid maximum of ‖Θ‖_max over the closed domain, refined until stable.
pub fn compute_frequency_box(chart: &ThetaChart, safety: f64) -> FrequencyBox {
    let r = chart.dim();
    let max_on = |m: usize| -> f64 {
        chart
            .domain()
            .grid(m)
            .iter()
            .map(|t| chart.theta(t).iter().fold(0.0f64, |a, x| a.max(x.abs())))
            .fold(0.0, f64::max)
    };
    let mut m = 9;
    let mut prev = max_on(m);
    loop {
        let next_m = 2 * m - 1;
        if next_m.pow(r as u32) > MAX_GRID_POINTS {
            break;
        }
        let cur = max_on(next_m);
        m = next_m;
        let change = (cur - prev).abs();
        prev = cur;
        if change < REFINE_TOL {
            break;
        }
    }
    FrequencyBox { half_width: prev * safety, center: vec![0.0; r], kind: BoxKind::Containing, grid_max: prev }
}

/// Integer points of max-norm exactly `radius`, in lexicographic order.
pub fn lattice_shell(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    if dim == 0 {
        return if radius == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut p = vec![-radius; dim];
    loop {
        if p.iter().any(|x| x.abs() == radius) || radius == 0 {
            out.push(p.clone());
        }
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if p[k] < radius {
                p[k] += 1;
                for q in p.iter_mut().skip(k + 1) {
                    *q = -radius;
                }
                break;
            }
        }
    }
}

/// First `count` lattice points in shell (spiral) order.
pub fn lattice_spiral(dim: usize, count: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut rad = 0;
    while out.len() < count {
        for p in lattice_shell(dim, rad) {
            if out.len() == count {
                break;
            }
            out.push(p);
        }
        rad += 1;
        if dim == 0 {
            break;
        }
    }
    out
}

/// max |G - I| for the Gram matrix of the first `count` normalized exponentials over C.
/// `order` is raised when needed so every composite panel covers at most half a period of the
/// widest frequency gap.
pub fn exponential_gram_residual(fbox: &FrequencyBox, count: usize, order: usize) -> f64 {
    let pts = lattice_spiral(fbox.dim(), count);
    let gap = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)))
        .max()
        .unwrap_or(0);
    let order = order.max(2 * crate::quadrature::PANEL_POINTS * (gap as usize + 1));
    let rule = TensorRule::over_box(&fbox.cube(), order);
    let vol = fbox.volume();
    let delta = fbox.spacing();
    let r = fbox.dim();
    let mut worst = 0.0f64;
    for (a, ka) in pts.iter().enumerate() {
        for (b, kb) in pts.iter().enumerate().skip(a) {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..rule.len() {
                let xi = rule.point(i);
                let phase: f64 = (0..r).map(|k| xi[k] * delta * (ka[k] - kb[k]) as f64).sum();
                acc += Complex64::from_polar(rule.weights[i], 2.0 * std::f64::consts::PI * phase);
            }
            let g = acc / vol;
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    worst
}
