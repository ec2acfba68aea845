//! Gauss–Legendre rules: 1-D composite panels and tensor products over boxes.

use crate::sampling::CoordBox;

/// Points per composite panel.
pub const PANEL_POINTS: usize = 8;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// A 1-D rule on an interval.
#[derive(Debug, Clone)]
pub struct Rule1d {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1d {
    /// `order` total nodes on [a, b], arranged as panels of [`PANEL_POINTS`].
    pub fn composite(a: f64, b: f64, order: usize) -> Self {
        Self::composite_with_breaks(a, b, order, &[])
    }

    /// Composite rule whose panels never straddle any point of `breaks`.
    pub fn composite_with_breaks(a: f64, b: f64, order: usize, breaks: &[f64]) -> Self {
        let mut cuts: Vec<f64> = breaks
            .iter()
            .cloned()
            .filter(|&x| x > a + 1e-14 && x < b - 1e-14)
            .collect();
        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
        let per_panel = order.clamp(1, PANEL_POINTS);
        let panels_total = (order / per_panel).max(1);
        let len = b - a;
        let (gx, gw) = gauss_legendre(per_panel);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for win in cuts.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let share = ((hi - lo) / len * panels_total as f64).round() as usize;
            let panels = share.max(1);
            let h = (hi - lo) / panels as f64;
            for p in 0..panels {
                let c = lo + (p as f64 + 0.5) * h;
                for (x, w) in gx.iter().zip(&gw) {
                    nodes.push(c + 0.5 * h * x);
                    weights.push(0.5 * h * w);
                }
            }
        }
        Rule1d { nodes, weights }
    }
}

/// Tensor-product rule with points stored row-major (`dim` coordinates each).
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl TensorRule {
    pub fn from_axes(axes: &[Rule1d]) -> Self {
        let dim = axes.len();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        if dim == 0 {
            return TensorRule { dim, points, weights: vec![1.0] };
        }
        let sizes: Vec<usize> = axes.iter().map(|a| a.nodes.len()).collect();
        let total: usize = sizes.iter().product();
        points.reserve(total * dim);
        weights.reserve(total);
        let mut idx = vec![0usize; dim];
        for _ in 0..total {
            let mut w = 1.0;
            for (k, &i) in idx.iter().enumerate() {
                points.push(axes[k].nodes[i]);
                w *= axes[k].weights[i];
            }
            weights.push(w);
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < sizes[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        TensorRule { dim, points, weights }
    }

    /// `order` nodes per axis over a coordinate box.
    pub fn over_box(b: &CoordBox, order: usize) -> Self {
        let axes: Vec<Rule1d> = (0..b.dim())
            .map(|k| Rule1d::composite(b.lo[k], b.hi[k], order))
            .collect();
        Self::from_axes(&axes)
    }

    /// Like [`TensorRule::over_box`] with per-axis breakpoints.
    pub fn over_box_with_breaks(b: &CoordBox, order: usize, breaks: &[Vec<f64>]) -> Self {
        let axes: Vec<Rule1d> = (0..b.dim())
            .map(|k| {
                let br = breaks.get(k).map(|v| v.as_slice()).unwrap_or(&[]);
                Rule1d::composite_with_breaks(b.lo[k], b.hi[k], order, br)
            })
            .collect();
        Self::from_axes(&axes)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }
}
