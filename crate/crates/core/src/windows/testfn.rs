use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bspline::{bspline, knots};
use super::window::{Window, WindowKind};
use crate::sampling::CoordBox;

const BUMP_DEGREE: usize = 3;
const MAX_BUMPS: usize = 5;

/// Where random bumps go.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum BumpPlacement {
    /// Anywhere inside the verification region.
    Region,
    /// Each bump inside one translate `tile - k·step` of an abelian tiling.
    WithinTiles { tile: CoordBox, step: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub center: Vec<f64>,
    pub width: Vec<f64>,
    pub coefficient: f64,
}

impl Bump {
    fn value(&self, t: &[f64]) -> f64 {
        let mut v = self.coefficient;
        for k in 0..t.len() {
            v *= bspline(BUMP_DEGREE, (t[k] - self.center[k]) / self.width[k]);
            if v == 0.0 {
                break;
            }
        }
        v
    }

    fn half_extent(&self, k: usize) -> f64 {
        (BUMP_DEGREE as f64 + 1.0) / 2.0 * self.width[k]
    }
}

/// g = Σ c_i Π_k b_3((t_k - m_ik)/w_ik), at most five bumps, drawn from (`seed`, `index`).
pub fn test_function(seed: u64, index: usize, region: &CoordBox, placement: &BumpPlacement) -> (Window, Vec<Bump>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index as u64));
    let r = region.dim();
    let count = rng.gen_range(1..=MAX_BUMPS);
    let ext = (BUMP_DEGREE as f64 + 1.0) / 2.0;
    let mut bumps = Vec::with_capacity(count);
    for _ in 0..count {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let coefficient = sign * rng.gen_range(0.5..1.5);
        let (center, width) = match placement {
            BumpPlacement::Region => {
                let width: Vec<f64> = (0..r).map(|k| region.width(k) * rng.gen_range(0.06..0.15)).collect();
                let center = (0..r)
                    .map(|k| {
                        let lo = region.lo[k] + ext * width[k];
                        let hi = region.hi[k] - ext * width[k];
                        rng.gen_range(lo..hi)
                    })
                    .collect();
                (center, width)
            }
            BumpPlacement::WithinTiles { tile, step } => {
                let shift: Vec<f64> = (0..r)
                    .map(|k| {
                        let kmin = ((tile.lo[k] - region.hi[k]) / step[k]).ceil() as i64;
                        let kmax = ((tile.hi[k] - region.lo[k]) / step[k]).floor() as i64;
                        let kk = if kmax > kmin { rng.gen_range(kmin..=kmax) } else { kmin };
                        -(kk as f64) * step[k]
                    })
                    .collect();
                let t = tile.translate(&shift);
                let width: Vec<f64> = (0..r).map(|k| t.width(k) * rng.gen_range(0.08..0.2)).collect();
                let center = (0..r)
                    .map(|k| {
                        let lo = t.lo[k] + ext * width[k] * 1.05;
                        let hi = t.hi[k] - ext * width[k] * 1.05;
                        rng.gen_range(lo..hi)
                    })
                    .collect();
                (center, width)
            }
        };
        bumps.push(Bump { center, width, coefficient });
    }
    (bumps_window(&bumps), bumps)
}

pub fn bumps_window(bumps: &[Bump]) -> Window {
    let r = bumps[0].center.len();
    let lo = (0..r)
        .map(|k| bumps.iter().map(|b| b.center[k] - b.half_extent(k)).fold(f64::INFINITY, f64::min))
        .collect();
    let hi = (0..r)
        .map(|k| bumps.iter().map(|b| b.center[k] + b.half_extent(k)).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let breaks = (0..r)
        .map(|k| {
            let mut v: Vec<f64> = bumps
                .iter()
                .flat_map(|b| knots(BUMP_DEGREE).into_iter().map(move |x| b.center[k] + x * b.width[k]))
                .collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        })
        .collect();
    let bs = bumps.to_vec();
    Window::from_fn(
        WindowKind::TestFunction,
        CoordBox { lo, hi },
        breaks,
        Arc::new(move |t: &[f64]| bs.iter().map(|b| b.value(t)).sum()),
    )
}
