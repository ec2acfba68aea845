use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::bspline::{bspline, knots};
use crate::coadjoint::ThetaChart;
use crate::error::{FrameError, Result};
use crate::sampling::{CoordBox, FrequencyBox};

/// Relative padding between a window's support and the chart domain.
pub const SUPPORT_PAD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    Partition,
    Parseval,
    Indicator,
    Custom,
    Tabulated,
    TestFunction,
}

pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real function on H in chart coordinates, supported in a coordinate box.
#[derive(Clone)]
pub struct Window {
    pub kind: WindowKind,
    pub support: CoordBox,
    /// Smoothness order of the spline factor, when there is one.
    pub order: Option<usize>,
    /// Per-axis points where the window may fail to be smooth.
    pub breaks: Vec<Vec<f64>>,
    eval: EvalFn,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("kind", &self.kind)
            .field("support", &self.support)
            .field("order", &self.order)
            .finish()
    }
}

impl Window {
    pub fn from_fn(kind: WindowKind, support: CoordBox, breaks: Vec<Vec<f64>>, eval: EvalFn) -> Self {
        let mut breaks = breaks;
        breaks.resize(support.dim(), Vec::new());
        Window { kind, support, order: None, breaks, eval }
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    /// Value at `t`; zero outside the support box.
    pub fn eval(&self, t: &[f64]) -> f64 {
        if self.support.contains(t) {
            (self.eval)(t)
        } else {
            0.0
        }
    }

    /// The same window times a constant.
    pub fn scaled(&self, c: f64) -> Window {
        let inner = self.eval.clone();
        let mut w = self.clone();
        w.eval = Arc::new(move |t| c * inner(t));
        w
    }

    /// Pointwise product with another function on the same support.
    pub fn times<F>(&self, kind: WindowKind, g: F) -> Window
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        let inner = self.eval.clone();
        let mut w = self.clone();
        w.kind = kind;
        w.eval = Arc::new(move |t| inner(t) * g(t));
        w
    }

    /// Errors unless the support sits inside `domain`, allowing [`SUPPORT_PAD`].
    pub fn check_inside(&self, domain: &CoordBox) -> Result<()> {
        for k in 0..self.dim() {
            let slack = SUPPORT_PAD * domain.width(k);
            if self.support.lo[k] < domain.lo[k] - slack || self.support.hi[k] > domain.hi[k] + slack {
                return Err(FrameError::Window(format!(
                    "support {:?}..{:?} leaves chart domain {:?}..{:?}",
                    self.support.lo, self.support.hi, domain.lo, domain.hi
                )));
            }
        }
        Ok(())
    }

    /// Writes `t_1..t_r,value` rows on a closed grid over the support.
    pub fn write_csv(&self, path: &Path, per_axis: usize) -> Result<()> {
        let io = |e: csv::Error| FrameError::Io { path: path.display().to_string(), source: e.into() };
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        let mut header: Vec<String> = (1..=self.dim()).map(|k| format!("t{k}")).collect();
        header.push("value".into());
        w.write_record(&header).map_err(io)?;
        let grid = self.support.interior_grid(per_axis);
        for t in grid {
            let mut row: Vec<String> = t.iter().map(|x| format!("{x:.17e}")).collect();
            row.push(format!("{:.17e}", self.eval(&t)));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| FrameError::Io { path: path.display().to_string(), source: e })?;
        Ok(())
    }
}

/// s_n(t) = b_n(εnt/2)^{1/2}, with translation step 2/(εn).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionWindow {
    pub n: usize,
    pub epsilon: f64,
}

impl PartitionWindow {
    pub fn new(n: usize, epsilon: f64) -> Result<Self> {
        if n == 0 || !(epsilon > 0.0) {
            return Err(FrameError::Window(format!("need n ≥ 1 and ε > 0 (got n = {n}, ε = {epsilon})")));
        }
        Ok(PartitionWindow { n, epsilon })
    }

    /// Chooses ε so the support is (-half_width, half_width).
    pub fn fitted(n: usize, half_width: f64) -> Result<Self> {
        Self::new(n, (n as f64 + 1.0) / (n as f64 * half_width))
    }

    fn scale(&self) -> f64 {
        self.epsilon * self.n as f64 / 2.0
    }

    pub fn value(&self, t: f64) -> f64 {
        bspline(self.n, self.scale() * t).sqrt()
    }

    pub fn step(&self) -> f64 {
        2.0 / (self.epsilon * self.n as f64)
    }

    pub fn half_support(&self) -> f64 {
        (self.n as f64 + 1.0) / 2.0 / self.scale()
    }

    pub fn knots(&self) -> Vec<f64> {
        knots(self.n).iter().map(|k| k / self.scale()).collect()
    }
}

/// s(t) = Π_k s_k(t_k) on H = H_n·H_c in second-kind coordinates.
pub fn product_window(parts: &[PartitionWindow]) -> Window {
    let support = CoordBox {
        lo: parts.iter().map(|p| -p.half_support()).collect(),
        hi: parts.iter().map(|p| p.half_support()).collect(),
    };
    let breaks = parts.iter().map(|p| p.knots()).collect();
    let ps = parts.to_vec();
    let mut w = Window::from_fn(
        WindowKind::Partition,
        support,
        breaks,
        Arc::new(move |t: &[f64]| ps.iter().zip(t).map(|(p, x)| p.value(*x)).product()),
    );
    w.order = parts.iter().map(|p| p.n).min();
    w
}

/// Fits a product of degree-`n` partition windows inside the chart domain.
///
/// Each axis window is centred in the domain and shrunk by [`SUPPORT_PAD`].
/// Returns the window and the per-axis translation steps.
pub fn fitted_partition_window(domain: &CoordBox, n: usize) -> Result<(Window, Vec<f64>)> {
    let r = domain.dim();
    let mut parts = Vec::with_capacity(r);
    for k in 0..r {
        let half = domain.hi[k].min(-domain.lo[k]);
        if !(half > 0.0) {
            return Err(FrameError::Window("domain must contain the identity in its interior".into()));
        }
        parts.push(PartitionWindow::fitted(n, half * (1.0 - SUPPORT_PAD))?);
    }
    let steps = parts.iter().map(|p| p.step()).collect();
    Ok((product_window(&parts), steps))
}

/// f = |C|^{-1/2} · s · w^{-1/2} with w(h) = W(Θ(h)).
pub fn parseval_window(chart: &Arc<ThetaChart>, s: &Window, fbox: &FrequencyBox) -> Result<Window> {
    s.check_inside(chart.domain())?;
    let norm = fbox.volume().powf(-0.5);
    let ch = chart.clone();
    let mut f = s.times(WindowKind::Parseval, move |t| match ch.weight_at(t) {
        Ok(w) => w.powf(-0.5),
        Err(_) => f64::NAN,
    });
    f = f.scaled(norm);
    Ok(f)
}

/// f = |C|^{-1/2} w^{-1/2} on the chart domain; ‖f‖² = |Θ(O)|/|C|.
pub fn indicator_window(chart: &Arc<ThetaChart>, fbox: &FrequencyBox) -> Window {
    let ch = chart.clone();
    let norm = fbox.volume().powf(-0.5);
    let r = chart.dim();
    Window::from_fn(
        WindowKind::Indicator,
        chart.domain().clone(),
        vec![Vec::new(); r],
        Arc::new(move |t: &[f64]| match ch.weight_at(t) {
            Ok(w) => norm * w.powf(-0.5),
            Err(_) => f64::NAN,
        }),
    )
}

/// Window read from a full tensor grid of `t_1..t_r,value` rows, multilinearly interpolated.
pub fn tabulated_window(path: &Path) -> Result<Window> {
    let io = |e: csv::Error| FrameError::Parse(format!("{}: {e}", path.display()));
    if !path.exists() {
        return Err(FrameError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "window file not found"),
        });
    }
    let mut rdr = csv::Reader::from_path(path).map_err(io)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(io)?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| FrameError::Parse(format!("{}: {e}", path.display()))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    if width < 2 || rows.iter().any(|r| r.len() != width) {
        return Err(FrameError::Parse(format!("{}: ragged or empty window table", path.display())));
    }
    let r = width - 1;
    let mut axes: Vec<Vec<f64>> = vec![Vec::new(); r];
    for row in &rows {
        for k in 0..r {
            axes[k].push(row[k]);
        }
    }
    for ax in axes.iter_mut() {
        ax.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ax.dedup();
        if ax.len() < 2 {
            return Err(FrameError::Parse("window table needs at least 2 points per axis".into()));
        }
    }
    let total: usize = axes.iter().map(|a| a.len()).product();
    if total != rows.len() {
        return Err(FrameError::Parse("window table is not a full tensor grid".into()));
    }
    let mut values = vec![0.0; total];
    for row in &rows {
        let mut idx = 0;
        for k in 0..r {
            let pos = axes[k].binary_search_by(|a| a.partial_cmp(&row[k]).unwrap()).unwrap();
            idx = idx * axes[k].len() + pos;
        }
        values[idx] = row[r];
    }
    let support = CoordBox {
        lo: axes.iter().map(|a| a[0]).collect(),
        hi: axes.iter().map(|a| *a.last().unwrap()).collect(),
    };
    let ax = axes.clone();
    Ok(Window::from_fn(
        WindowKind::Tabulated,
        support,
        axes,
        Arc::new(move |t: &[f64]| multilinear(&ax, &values, t)),
    ))
}

fn multilinear(axes: &[Vec<f64>], values: &[f64], t: &[f64]) -> f64 {
    let r = axes.len();
    let mut base = Vec::with_capacity(r);
    let mut frac = Vec::with_capacity(r);
    for k in 0..r {
        let a = &axes[k];
        let x = t[k].clamp(a[0], *a.last().unwrap());
        let mut i = a.partition_point(|v| *v <= x).saturating_sub(1);
        if i >= a.len() - 1 {
            i = a.len() - 2;
        }
        base.push(i);
        frac.push((x - a[i]) / (a[i + 1] - a[i]));
    }
    let mut acc = 0.0;
    for corner in 0..(1usize << r) {
        let mut w = 1.0;
        let mut idx = 0;
        for k in 0..r {
            let bit = (corner >> k) & 1;
            w *= if bit == 1 { frac[k] } else { 1.0 - frac[k] };
            idx = idx * axes[k].len() + base[k] + bit;
        }
        acc += w * values[idx];
    }
    acc
}
