use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coefficients::{frame_sum, norm_squared, SumOptions, MAX_DOUBLINGS};
use crate::coadjoint::ThetaChart;
use crate::error::{FrameError, Result};
use crate::lie::GroupModel;
use crate::quadrature::TensorRule;
use crate::sampling::{lattice_shell, lattice_spiral, periodize, CoordBox, CoverGammaH, FrequencyBox};
use crate::windows::Window;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const BOUNDS_REFINE_TOL: f64 = 1e-6;
const MAX_BOUNDS_POINTS: usize = 40_000;
/// Grid points times cover points; refinement stops before exceeding it.
const MAX_BOUNDS_WORK: usize = 2_000_000;
pub const NECESSITY_TOL: f64 = 1e-9;

/// A group element acting through the induced representation.
#[derive(Debug, Clone, PartialEq)]
pub enum RepElement {
    /// exp X with X ∈ n, coordinates in the X basis.
    Normal(Vec<f64>),
    /// z ∈ H in second-kind coordinates.
    Subgroup(Vec<f64>),
}

pub fn rep_apply(chart: &ThetaChart, element: &RepElement, f: &Window, h: &[f64]) -> Result<Complex64> {
    match element {
        RepElement::Normal(x) => Ok(rep_apply_n(chart, f, x, h)),
        RepElement::Subgroup(z) => Ok(Complex64::new(rep_apply_h(chart.group(), f, z, h)?, 0.0)),
    }
}

/// π(exp X) f (h) = e^{2πi⟨β(h), X⟩} f(h) for X ∈ n.
pub fn rep_apply_n(chart: &ThetaChart, f: &Window, x: &[f64], h: &[f64]) -> Complex64 {
    let b = chart.beta(h);
    let ph: f64 = b.iter().zip(x).map(|(a, c)| a * c).sum();
    Complex64::from_polar(f.eval(h), TWO_PI * ph)
}

/// π(z) f (h) = f(z⁻¹h) for z ∈ H.
pub fn rep_apply_h(group: &GroupModel, f: &Window, z: &[f64], h: &[f64]) -> Result<f64> {
    let zinv = group.inverse(z)?;
    Ok(f.eval(&group.product(&zinv, h)?))
}

/// F(h) = Σ_ℓ |f(ℓh)|² w(ℓh).
pub fn periodization(chart: &ThetaChart, cover: &CoverGammaH, f: &Window, h: &[f64]) -> Result<f64> {
    periodize(chart.group(), cover, &f.support, |y| Ok(f.eval(y).powi(2) * chart.weight_at(y)?), h)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameBounds {
    pub m_hat: f64,
    pub big_m_hat: f64,
    pub volume: f64,
    pub lower: f64,
    pub upper: f64,
    pub tight: bool,
    pub regional: bool,
    pub grid_per_axis: usize,
    pub refine_change: f64,
}

/// m̂, M̂ of F over a fundamental cell (abelian lattices) or over `region`, and A = m̂|C|, B = M̂|C|.
pub fn estimate_frame_bounds(
    chart: &ThetaChart,
    cover: &CoverGammaH,
    f: &Window,
    fbox: &FrequencyBox,
    region: Option<&CoordBox>,
    start_per_axis: usize,
) -> Result<FrameBounds> {
    let cell = cover.fundamental_cell(chart.group());
    let regional = cell.is_none();
    let domain = match (cell, region) {
        (Some(c), _) => c,
        (None, Some(r)) => r.clone(),
        (None, None) => {
            return Err(FrameError::InvalidSpec("frame bounds need a region for non-lattice covers".into()))
        }
    };
    let r = chart.dim();
    let cover_size = match cover {
        CoverGammaH::Points { points, .. } => points.len(),
        CoverGammaH::Lattice { .. } => 1,
    };
    let extremes = |m: usize| -> Result<(f64, f64)> {
        let values = domain
            .interior_grid(m)
            .par_iter()
            .map(|h| periodization(chart, cover, f, h))
            .collect::<Result<Vec<f64>>>()?;
        Ok(values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v))))
    };
    let mut m = start_per_axis.max(2);
    let (mut lo, mut hi) = extremes(m)?;
    let mut change = f64::INFINITY;
    loop {
        let next = 2 * m;
        let points = next.pow(r as u32);
        if points > MAX_BOUNDS_POINTS || points * cover_size > MAX_BOUNDS_WORK {
            break;
        }
        let (l2, h2) = extremes(next)?;
        change = (l2 - lo).abs().max((h2 - hi).abs());
        lo = lo.min(l2);
        hi = hi.max(h2);
        m = next;
        if change < BOUNDS_REFINE_TOL {
            break;
        }
    }
    let vol = fbox.volume();
    let tight = (hi - lo).abs() <= 1e-9 * hi.abs().max(1e-300);
    Ok(FrameBounds {
        m_hat: lo,
        big_m_hat: hi,
        volume: vol,
        lower: lo * vol,
        upper: hi * vol,
        tight,
        regional,
        grid_per_axis: m,
        refine_change: change,
    })
}

/// A/|C| ≤ m̂ and M̂ ≤ B/|C| up to [`NECESSITY_TOL`].
pub fn necessity_check(lower: f64, upper: f64, m_hat: f64, big_m_hat: f64, volume: f64) -> bool {
    lower / volume <= m_hat + NECESSITY_TOL && big_m_hat <= upper / volume + NECESSITY_TOL
}

/// |C| ∫ |g|² F ρ over g's support.
pub fn tonelli_rhs(
    chart: &ThetaChart,
    cover: &CoverGammaH,
    f: &Window,
    g: &Window,
    fbox: &FrequencyBox,
    order: usize,
) -> Result<f64> {
    let breaks = oracle_breaks(chart.group(), cover, f, g);
    let rule = TensorRule::over_box_with_breaks(&g.support, order, &breaks);
    let mut acc = 0.0;
    for i in 0..rule.len() {
        let h = rule.point(i);
        let gv = g.eval(h);
        if gv == 0.0 {
            continue;
        }
        acc += gv * gv * periodization(chart, cover, f, h)? * chart.haar_density(h)? * rule.weights[i];
    }
    Ok(fbox.volume() * acc)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OracleCheck {
    pub frame_sum: f64,
    pub integral: f64,
    pub residual: f64,
}

impl OracleCheck {
    pub fn new(frame_sum: f64, integral: f64) -> Self {
        let scale = frame_sum.abs().max(integral.abs());
        let residual = if scale == 0.0 { 0.0 } else { (frame_sum - integral).abs() / scale };
        OracleCheck { frame_sum, integral, residual }
    }
}

/// Both sides of s(g, f) = |C| ∫ |g|² F dμ, by coefficient summation and by direct quadrature.
pub fn oracle_identity_check(
    chart: &ThetaChart,
    g: &Window,
    f: &Window,
    cover: &CoverGammaH,
    fbox: &FrequencyBox,
    opts: &SumOptions,
) -> Result<OracleCheck> {
    let lhs = frame_sum(chart, g, f, cover, fbox, opts)?;
    let rhs = tonelli_rhs(chart, cover, f, g, fbox, 2 * opts.quad_order)?;
    Ok(OracleCheck::new(lhs.sum, rhs))
}

/// g's knots plus, for abelian lattices, the translated knots and edges of f.
fn oracle_breaks(group: &GroupModel, cover: &CoverGammaH, f: &Window, g: &Window) -> Vec<Vec<f64>> {
    let mut out = g.breaks.clone();
    out.resize(g.dim(), Vec::new());
    if let (CoverGammaH::Lattice { step }, true) = (cover, group.is_abelian()) {
        for k in 0..g.dim() {
            let mut fk: Vec<f64> = f.breaks.get(k).cloned().unwrap_or_default();
            fk.push(f.support.lo[k]);
            fk.push(f.support.hi[k]);
            let lo = ((g.support.lo[k] - f.support.hi[k]) / step[k]).floor() as i64 - 1;
            let hi = ((g.support.hi[k] - f.support.lo[k]) / step[k]).ceil() as i64 + 1;
            for m in lo..=hi {
                for x in &fk {
                    // ℓh ∈ f-knot with ℓ = m·step  ⇔  h = x - m·step.
                    out[k].push(x - m as f64 * step[k]);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OnbReport {
    pub gram_residual: f64,
    pub patch_size: usize,
    pub window_norm_sq: f64,
}

/// max |G - I| over a patch of the system: ℓ within shell `ell_radius`, the first `kappa_count` κ.
pub fn verify_onb(
    chart: &ThetaChart,
    cover: &CoverGammaH,
    f: &Window,
    fbox: &FrequencyBox,
    ell_radius: i64,
    kappa_count: usize,
    order: usize,
) -> Result<OnbReport> {
    let CoverGammaH::Lattice { step } = cover else {
        return Err(FrameError::Unsupported("ONB patch check needs a lattice cover".into()));
    };
    let r = chart.dim();
    let mut ells: Vec<Vec<f64>> = Vec::new();
    for rad in 0..=ell_radius {
        for k in lattice_shell(r, rad) {
            ells.push(k.iter().zip(step).map(|(a, s)| *a as f64 * s).collect());
        }
    }
    let kappas = lattice_spiral(r, kappa_count);
    let size = ells.len() * kappas.len();
    let mut order = order;
    let mut worst = gram_patch_residual(chart, f, fbox, &ells, &kappas, order)?;
    for _ in 0..MAX_DOUBLINGS {
        let next = gram_patch_residual(chart, f, fbox, &ells, &kappas, 2 * order)?;
        order *= 2;
        let settled = (next - worst).abs() < 1e-10;
        worst = next;
        if settled {
            break;
        }
    }
    let norm = norm_squared(chart, f, order)?;
    Ok(OnbReport { gram_residual: worst, patch_size: size, window_norm_sq: norm })
}

fn gram_patch_residual(
    chart: &ThetaChart,
    f: &Window,
    fbox: &FrequencyBox,
    ells: &[Vec<f64>],
    kappas: &[Vec<i64>],
    order: usize,
) -> Result<f64> {
    let r = chart.dim();
    let group = chart.group();
    let rule = TensorRule::over_box_with_breaks(&f.support, order, &f.breaks);
    let delta = fbox.spacing();
    let mut worst = 0.0f64;
    for (a, la) in ells.iter().enumerate() {
        let lainv = group.inverse(la)?;
        for (b, lb) in ells.iter().enumerate().skip(a) {
            // y ranges over f's support; m = ℓ_b ℓ_a⁻¹ y.
            let mut ys = Vec::new();
            for i in 0..rule.len() {
                let y = rule.point(i);
                let fy = f.eval(y);
                if fy == 0.0 {
                    continue;
                }
                let m = group.product(lb, &group.product(&lainv, y)?)?;
                let fm = f.eval(&m);
                if fm == 0.0 {
                    continue;
                }
                let w = fy * fm * chart.haar_density(y)? * rule.weights[i];
                ys.push((w, chart.theta(y), chart.theta(&m)));
            }
            for (i, ka) in kappas.iter().enumerate() {
                let j0 = if a == b { i } else { 0 };
                for (j, kb) in kappas.iter().enumerate().skip(j0) {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (w, ty, tm) in &ys {
                        let ph: f64 = (0..r).map(|k| ty[k] * ka[k] as f64 - tm[k] * kb[k] as f64).sum::<f64>() * delta;
                        acc += Complex64::from_polar(*w, TWO_PI * ph);
                    }
                    let target = if a == b && i == j { 1.0 } else { 0.0 };
                    worst = worst.max((acc - target).norm());
                }
            }
        }
    }
    Ok(worst)
}
