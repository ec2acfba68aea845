use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coadjoint::ThetaChart;
use crate::error::Result;
use crate::quadrature::TensorRule;
use crate::sampling::{lattice_shell, CoverGammaH, FrequencyBox};
use crate::windows::Window;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Relative change at which quadrature doubling stops for a single coefficient.
pub const COEFF_QUAD_RTOL: f64 = 1e-8;
/// Relative change at which quadrature doubling stops for a frame sum.
pub const SUM_QUAD_RTOL: f64 = 1e-6;
pub const MAX_DOUBLINGS: usize = 3;
const BREAK_BUDGET: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumOptions {
    /// Gauss–Legendre nodes per axis.
    pub quad_order: usize,
    /// Stop when a shell adds less than this fraction of the running sum.
    pub tail_tol: f64,
    /// Shell radius (per axis) after which truncation is reported as divergent.
    pub max_radius: i64,
    pub min_radius: i64,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions { quad_order: 32, tail_tol: 1e-4, max_radius: 64, min_radius: 2 }
    }
}

/// f(h)ρ(h)·weight and Θ(h) at the quadrature nodes over f's support.
struct Nodes {
    rule: TensorRule,
    fw: Vec<f64>,
    theta: Vec<Vec<f64>>,
}

impl Nodes {
    fn new(chart: &ThetaChart, f: &Window, order: usize, breaks: &[Vec<f64>]) -> Result<Self> {
        let rule = TensorRule::over_box_with_breaks(&f.support, order, breaks);
        let mut fw = Vec::with_capacity(rule.len());
        let mut theta = Vec::with_capacity(rule.len());
        for i in 0..rule.len() {
            let h = rule.point(i);
            let fv = f.eval(h);
            if fv == 0.0 {
                fw.push(0.0);
            } else {
                fw.push(fv * chart.haar_density(h)? * rule.weights[i]);
            }
            theta.push(chart.theta(h));
        }
        Ok(Nodes { rule, fw, theta })
    }

    /// g(ℓ⁻¹h) f(h) ρ(h) w_i at every node.
    fn integrand(&self, chart: &ThetaChart, g: &Window, ell: &[f64]) -> Result<Vec<f64>> {
        let group = chart.group();
        let linv = group.inverse(ell)?;
        let mut out = vec![0.0; self.fw.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            if self.fw[i] == 0.0 {
                continue;
            }
            let x = group.product(&linv, self.rule.point(i))?;
            let gv = g.eval(&x);
            if gv != 0.0 {
                *slot = gv * self.fw[i];
            }
        }
        Ok(out)
    }
}

/// f's knots plus, for abelian H, g's knots and edges moved by each ℓ (ℓ⁻¹h = x ⇔ h = ℓ + x).
///
/// The moved knots are dropped when pieces × translates would exceed [`BREAK_BUDGET`].
fn node_breaks(chart: &ThetaChart, f: &Window, g: &Window, ells: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = f.breaks.clone();
    out.resize(f.dim(), Vec::new());
    if !chart.group().is_abelian() {
        return out;
    }
    let mut extras = Vec::with_capacity(f.dim());
    for k in 0..f.dim() {
        let mut gk = g.breaks.get(k).cloned().unwrap_or_default();
        gk.push(g.support.lo[k]);
        gk.push(g.support.hi[k]);
        let (lo, hi) = (f.support.lo[k], f.support.hi[k]);
        let mut extra: Vec<f64> = ells
            .iter()
            .flat_map(|ell| gk.iter().map(move |x| x + ell[k]))
            .filter(|x| *x > lo && *x < hi)
            .collect();
        extra.sort_by(|a, b| a.partial_cmp(b).unwrap());
        extra.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        extras.push(extra);
    }
    let pieces: usize = out.iter().zip(&extras).map(|(b, e)| b.len() + e.len() + 1).product();
    if pieces.saturating_mul(ells.len().max(1)) <= BREAK_BUDGET {
        for (axis, extra) in out.iter_mut().zip(extras) {
            axis.extend(extra);
        }
    }
    out
}

fn phase_sum(integrand: &[f64], theta: &[Vec<f64>], delta: f64, kappa: &[i64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &v) in integrand.iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let ph: f64 = theta[i].iter().zip(kappa).map(|(x, k)| x * *k as f64).sum::<f64>() * delta;
        acc += Complex64::from_polar(v, -TWO_PI * ph);
    }
    acc
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coefficient {
    pub value: (f64, f64),
    pub quad_order: usize,
    pub rel_change: f64,
    pub flagged: bool,
}

impl Coefficient {
    pub fn complex(&self) -> Complex64 {
        Complex64::new(self.value.0, self.value.1)
    }
}

/// ⟨g, π(ℓ⁻¹)π(exp PX)f⟩ with X = κ/(2ς) on the J axes, by adaptive tensor quadrature.
pub fn frame_coefficient(
    chart: &ThetaChart,
    g: &Window,
    f: &Window,
    ell: &[f64],
    kappa: &[i64],
    fbox: &FrequencyBox,
    quad_order: usize,
) -> Result<Coefficient> {
    let delta = fbox.spacing();
    let breaks = node_breaks(chart, f, g, &[ell.to_vec()]);
    let eval = |order: usize| -> Result<Complex64> {
        let nodes = Nodes::new(chart, f, order, &breaks)?;
        let integ = nodes.integrand(chart, g, ell)?;
        Ok(phase_sum(&integ, &nodes.theta, delta, kappa))
    };
    let mut order = quad_order;
    let mut prev = eval(order)?;
    let mut rel = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        order *= 2;
        let cur = eval(order)?;
        rel = (cur - prev).norm() / cur.norm().max(1e-300);
        prev = cur;
        if rel < COEFF_QUAD_RTOL || cur.norm() < 1e-14 {
            rel = if cur.norm() < 1e-14 { 0.0 } else { rel };
            break;
        }
    }
    Ok(Coefficient {
        value: (prev.re, prev.im),
        quad_order: order,
        rel_change: rel,
        flagged: rel >= COEFF_QUAD_RTOL,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameSum {
    pub sum: f64,
    pub radius: i64,
    pub last_increment: f64,
    pub translates: usize,
    pub quad_order: usize,
    pub quad_rel_change: f64,
    pub diverging: bool,
}

/// Σ_ℓ Σ_κ |⟨g, π(ℓ⁻¹)π(exp PX_κ)f⟩|² truncated by shells of Γ_N.
pub fn frame_sum(
    chart: &ThetaChart,
    g: &Window,
    f: &Window,
    cover: &CoverGammaH,
    fbox: &FrequencyBox,
    opts: &SumOptions,
) -> Result<FrameSum> {
    let ells = cover.candidates_pair(chart.group(), &f.support, &g.support)?;
    let mut order = opts.quad_order;
    let first = truncated_sum(chart, g, f, &ells, fbox, opts, order, None)?;
    let mut result = first;
    let mut rel = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        order *= 2;
        let next = truncated_sum(chart, g, f, &ells, fbox, opts, order, Some(result.radius))?;
        rel = (next.sum - result.sum).abs() / next.sum.abs().max(1e-300);
        result = FrameSum { radius: result.radius, last_increment: result.last_increment, diverging: result.diverging, ..next };
        if rel < SUM_QUAD_RTOL {
            break;
        }
    }
    result.quad_rel_change = rel;
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn truncated_sum(
    chart: &ThetaChart,
    g: &Window,
    f: &Window,
    ells: &[Vec<f64>],
    fbox: &FrequencyBox,
    opts: &SumOptions,
    order: usize,
    fixed_radius: Option<i64>,
) -> Result<FrameSum> {
    let breaks = node_breaks(chart, f, g, ells);
    let nodes = Nodes::new(chart, f, order, &breaks)?;
    let mut integrands = Vec::new();
    for ell in ells {
        let v = nodes.integrand(chart, g, ell)?;
        if v.iter().any(|x| *x != 0.0) {
            integrands.push(v);
        }
    }
    let r = chart.dim();
    let delta = fbox.spacing();
    let n_nodes = nodes.fw.len();
    let phasor: Vec<Vec<Complex64>> = (0..r)
        .map(|a| (0..n_nodes).map(|i| Complex64::from_polar(1.0, -TWO_PI * delta * nodes.theta[i][a])).collect())
        .collect();
    // powers[a][k][i] = phasor[a][i]^k for k ≥ 0.
    let mut powers: Vec<Vec<Vec<Complex64>>> = (0..r).map(|_| vec![vec![Complex64::new(1.0, 0.0); n_nodes]]).collect();
    let mut total = 0.0;
    let mut radius = 0;
    let mut last;
    let mut diverging = false;
    loop {
        for a in 0..r {
            while powers[a].len() <= radius as usize {
                let prev = powers[a].last().unwrap();
                let next: Vec<Complex64> = prev.iter().zip(&phasor[a]).map(|(p, z)| p * z).collect();
                powers[a].push(next);
            }
        }
        let shell = lattice_shell(r, radius);
        let incs: Vec<f64> = shell
            .par_iter()
            .map(|kappa| {
                let mut p = vec![Complex64::new(1.0, 0.0); n_nodes];
                for a in 0..r {
                    let k = kappa[a];
                    let tab = &powers[a][k.unsigned_abs() as usize];
                    for i in 0..n_nodes {
                        p[i] *= if k >= 0 { tab[i] } else { tab[i].conj() };
                    }
                }
                integrands
                    .iter()
                    .map(|v| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for i in 0..n_nodes {
                            if v[i] != 0.0 {
                                acc += p[i] * v[i];
                            }
                        }
                        acc.norm_sqr()
                    })
                    .sum::<f64>()
            })
            .collect();
        let inc: f64 = incs.iter().sum();
        total += inc;
        last = if total > 0.0 { inc / total } else { 0.0 };
        match fixed_radius {
            Some(fr) => {
                if radius >= fr {
                    break;
                }
            }
            None => {
                if radius >= opts.min_radius && last < opts.tail_tol {
                    break;
                }
                if radius >= opts.max_radius {
                    diverging = true;
                    break;
                }
            }
        }
        radius += 1;
    }
    Ok(FrameSum {
        sum: total,
        radius,
        last_increment: last,
        translates: integrands.len(),
        quad_order: order,
        quad_rel_change: 0.0,
        diverging,
    })
}

/// ‖g‖² = ∫ |g|² ρ over g's support.
pub fn norm_squared(chart: &ThetaChart, g: &Window, order: usize) -> Result<f64> {
    let rule = TensorRule::over_box_with_breaks(&g.support, order, &g.breaks);
    let mut acc = 0.0;
    for i in 0..rule.len() {
        let h = rule.point(i);
        let v = g.eval(h);
        if v != 0.0 {
            acc += v * v * chart.haar_density(h)? * rule.weights[i];
        }
    }
    Ok(acc)
}
