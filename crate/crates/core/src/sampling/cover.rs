use serde::{Deserialize, Serialize};

use super::coordbox::{tensor, CoordBox};
use crate::error::{FrameError, Result};
use crate::lie::{GroupModel, LieSplitSpec};

/// Discrete set Γ_H. The periodization sums over ℓ ∈ Γ_H of |f(ℓh)|².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverGammaH {
    /// Second-kind lattice {exp(k_1 δ_1 A_1)···exp(k_r δ_r A_r)}.
    Lattice { step: Vec<f64> },
    /// Explicit finite set of elements ℓ.
    Points { points: Vec<Vec<f64>>, separation: f64, region: CoordBox },
}

impl CoverGammaH {
    pub fn lattice(step: Vec<f64>) -> Self {
        CoverGammaH::Lattice { step }
    }

    pub fn is_regional(&self) -> bool {
        matches!(self, CoverGammaH::Points { .. })
    }

    /// Cover elements whose coordinates lie in a closed box.
    pub fn elements_in(&self, b: &CoordBox) -> Vec<Vec<f64>> {
        match self {
            CoverGammaH::Lattice { step } => {
                let axes: Vec<Vec<f64>> = (0..b.dim())
                    .map(|k| {
                        let lo = (b.lo[k] / step[k] - 1e-9).ceil() as i64;
                        let hi = (b.hi[k] / step[k] + 1e-9).floor() as i64;
                        (lo..=hi).map(|i| i as f64 * step[k]).collect()
                    })
                    .collect();
                tensor(&axes)
            }
            CoverGammaH::Points { points, .. } => {
                points.iter().filter(|p| b.contains_closed(p, 1e-12)).cloned().collect()
            }
        }
    }

    fn pad(&self) -> Vec<f64> {
        match self {
            CoverGammaH::Lattice { step } => step.clone(),
            CoverGammaH::Points { points, separation, .. } => {
                vec![*separation; points.first().map(|p| p.len()).unwrap_or(0)]
            }
        }
    }

    /// Elements ℓ with ℓh possibly inside `target`.
    pub fn candidates(&self, group: &GroupModel, target: &CoordBox, h: &[f64]) -> Result<Vec<Vec<f64>>> {
        let bb = if group.is_abelian() {
            CoordBox {
                lo: target.lo.iter().zip(h).map(|(a, x)| a - x).collect(),
                hi: target.hi.iter().zip(h).map(|(a, x)| a - x).collect(),
            }
        } else {
            let hinv = group.inverse(h)?;
            let mut pts = Vec::new();
            for y in target.grid(5) {
                // Second-kind coordinates need not be global; skip grid points whose
                // translate leaves the chart.
                match group.product(&y, &hinv) {
                    Ok(p) => pts.push(p),
                    Err(FrameError::NoConvergence { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            padded_bounds(&pts, &self.pad())
        };
        Ok(self.elements_in(&bb))
    }

    /// Elements ℓ with ℓ⁻¹h ∈ `g_support` for some h ∈ `f_support`.
    pub fn candidates_pair(
        &self,
        group: &GroupModel,
        f_support: &CoordBox,
        g_support: &CoordBox,
    ) -> Result<Vec<Vec<f64>>> {
        let bb = if group.is_abelian() {
            CoordBox {
                lo: f_support.lo.iter().zip(&g_support.hi).map(|(a, b)| a - b).collect(),
                hi: f_support.hi.iter().zip(&g_support.lo).map(|(a, b)| a - b).collect(),
            }
        } else {
            let mut pts = Vec::new();
            for y in f_support.grid(5) {
                for x in g_support.grid(5) {
                    // ℓ = y x⁻¹
                    let xinv = group.inverse(&x)?;
                    pts.push(group.product(&y, &xinv)?);
                }
            }
            padded_bounds(&pts, &self.pad())
        };
        Ok(self.elements_in(&bb))
    }

    /// A fundamental cell of an abelian lattice; None otherwise.
    pub fn fundamental_cell(&self, group: &GroupModel) -> Option<CoordBox> {
        match self {
            CoverGammaH::Lattice { step } if group.is_abelian() => {
                Some(CoordBox { lo: vec![0.0; step.len()], hi: step.clone() })
            }
            _ => None,
        }
    }
}

fn padded_bounds(pts: &[Vec<f64>], pad: &[f64]) -> CoordBox {
    let r = pad.len();
    let mut lo = vec![f64::INFINITY; r];
    let mut hi = vec![f64::NEG_INFINITY; r];
    for p in pts {
        for k in 0..r {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    for k in 0..r {
        let w = hi[k] - lo[k];
        lo[k] -= 0.1 * w + pad[k];
        hi[k] += 0.1 * w + pad[k];
    }
    CoordBox { lo, hi }
}

/// Checks that span(A_1..A_j) is an ideal of span(A_1..A_{j+1}) for every j.
pub fn has_ideal_chain(spec: &LieSplitSpec) -> bool {
    let (n, r) = (spec.n_dim(), spec.r_dim());
    for j in 0..r {
        for i in 0..j {
            for k in j..r {
                if spec.c(n + j, n + i, n + k).abs() > 1e-14 {
                    return false;
                }
            }
        }
    }
    true
}

/// Lattice cover with coordinate step `step`; H must be solvable with an ideal-chain basis.
pub fn build_tiling_cover(spec: &LieSplitSpec, step: Vec<f64>) -> Result<CoverGammaH> {
    if !spec.h_solvable {
        return Err(FrameError::Unsupported("tiling covers need a solvable H; use a greedy cover".into()));
    }
    if step.len() != spec.r_dim() || step.iter().any(|s| !(*s > 0.0)) {
        return Err(FrameError::InvalidSpec(format!("bad lattice step {step:?}")));
    }
    if !has_ideal_chain(spec) {
        return Err(FrameError::Unsupported(
            "h basis is not ordered along an ideal chain; reorder it for second-kind tiling".into(),
        ));
    }
    Ok(CoverGammaH::lattice(step))
}

/// Greedy maximal Z-separated subset of a grid over [-R, R]^r; stores ℓ = γ⁻¹.
pub fn build_greedy_cover(group: &GroupModel, region_radius: f64, separation: f64) -> Result<CoverGammaH> {
    let r = group.dim();
    if !(separation > 0.0) || !(region_radius > 0.0) {
        return Err(FrameError::InvalidSpec("greedy cover needs positive radii".into()));
    }
    let region = CoordBox::symmetric(r, region_radius);
    let per_axis = ((2.0 * region_radius) / (separation / 2.0)).round() as usize + 1;
    let grid = region.grid(per_axis.max(2));
    let mut chosen: Vec<Vec<f64>> = Vec::new();
    for p in grid {
        let far = chosen
            .iter()
            .all(|q| q.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) >= separation - 1e-12);
        if far {
            chosen.push(p);
        }
    }
    let points = chosen.iter().map(|g| group.inverse(g)).collect::<Result<Vec<_>>>()?;
    Ok(CoverGammaH::Points { points, separation, region })
}

/// Σ_ℓ eval(ℓh) over cover elements whose translate can reach `support`.
pub fn periodize<F>(group: &GroupModel, cover: &CoverGammaH, support: &CoordBox, eval: F, h: &[f64]) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut acc = 0.0;
    for l in cover.candidates(group, support, h)? {
        if let Some(y) = group.product_within(&l, h, &support.lo, &support.hi)? {
            acc += eval(&y)?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverReport {
    pub m_hat: f64,
    pub big_m_hat: f64,
    pub grid_points: usize,
    pub regional: bool,
}

/// min and max of Σ_ℓ |s(ℓh)|² over a grid of `domain`.
pub fn verify_cover<F>(
    group: &GroupModel,
    cover: &CoverGammaH,
    support: &CoordBox,
    s: F,
    domain: &CoordBox,
    per_axis: usize,
) -> Result<CoverReport>
where
    F: Fn(&[f64]) -> f64,
{
    let grid = domain.interior_grid(per_axis);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for h in &grid {
        let v = periodize(group, cover, support, |y| Ok(s(y).powi(2)), h)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(CoverReport { m_hat: lo, big_m_hat: hi, grid_points: grid.len(), regional: cover.is_regional() })
}
