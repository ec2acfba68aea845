//! Worked groups with closed-form ground truth, and the gl(n) ⋊ K construction.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{FrameError, Result};
use crate::lie::{HaarSource, LieSplitSpec};
use crate::linalg;
use crate::pipeline::{CoverRecipe, Defaults, FrequencyRecipe, PlacementRecipe, Problem, WindowRecipe};
use crate::sampling::CoordBox;

pub type VecFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

pub const CATALOG_IDS: [&str; 7] = [
    "axb",
    "heisenberg",
    "solv_oscillator",
    "toeplitz_shearlet",
    "sl2_embed",
    "onb_step3",
    "free_nilpotent_step2",
];

/// Closed forms in chart coordinates; Θ and W use the sorted index set.
#[derive(Clone, Default)]
pub struct ClosedForms {
    pub beta: Option<VecFn>,
    pub theta: Option<VecFn>,
    pub theta_inverse: Option<VecFn>,
    pub weight: Option<ScalarFn>,
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub title: &'static str,
    /// What the construction is expected to produce.
    pub note: &'static str,
    pub problem: Problem,
    pub closed: ClosedForms,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("id", &self.id).field("title", &self.title).finish()
    }
}

pub fn get_entry(id: &str) -> Result<CatalogEntry> {
    match id {
        "axb" => Ok(axb()),
        "heisenberg" => Ok(heisenberg()),
        "solv_oscillator" => Ok(solv_oscillator()),
        "toeplitz_shearlet" => Ok(toeplitz_shearlet()),
        "sl2_embed" => sl2_embed(),
        "onb_step3" => onb_step3(),
        "free_nilpotent_step2" => Ok(free_nilpotent_step2()),
        other => Err(FrameError::UnknownCatalog(other.to_string())),
    }
}

pub fn all_entries() -> Result<Vec<CatalogEntry>> {
    CATALOG_IDS.iter().map(|id| get_entry(id)).collect()
}

fn vec_fn<F: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static>(f: F) -> Option<VecFn> {
    Some(Arc::new(f))
}

fn scalar_fn<F: Fn(&[f64]) -> f64 + Send + Sync + 'static>(f: F) -> Option<ScalarFn> {
    Some(Arc::new(f))
}

fn interval(lo: f64, hi: f64) -> CoordBox {
    CoordBox { lo: vec![lo], hi: vec![hi] }
}

fn square(lo: f64, hi: f64) -> CoordBox {
    CoordBox { lo: vec![lo; 2], hi: vec![hi; 2] }
}

/// [A, X] = X, λ = X*.
fn axb() -> CatalogEntry {
    let mut spec = LieSplitSpec::new("axb", 1, 1);
    spec.set_bracket(1, 0, 0, 1.0);
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = Some(1);
    CatalogEntry {
        id: "axb",
        title: "affine group of the line",
        note: "spline Parseval window with the matched lattice gives A = B = 1",
        problem: Problem {
            name: "axb".into(),
            spec: Arc::new(spec),
            lambda: vec![1.0],
            index_set: None,
            domain: Some(interval(-1.0, 1.0)),
            haar: HaarSource::MaurerCartan,
            defaults: Defaults {
                window: WindowRecipe::SplineParseval { degree: 4 },
                cover: CoverRecipe::Matched,
                frequency: FrequencyRecipe::Computed,
                region: interval(-3.0, 3.0),
                placement: PlacementRecipe::Region,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| vec![(-t[0]).exp()]),
            theta: vec_fn(|t| vec![(-t[0]).exp()]),
            theta_inverse: vec_fn(|x| vec![-x[0].ln()]),
            weight: scalar_fn(|x| 1.0 / x[0]),
        },
    }
}

/// Basis (X, Y, A) with [A, Y] = X and λ = X*: Gabor systems on the line.
fn heisenberg() -> CatalogEntry {
    let mut spec = LieSplitSpec::new("heisenberg", 2, 1);
    spec.set_bracket(2, 1, 0, 1.0);
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = Some(1);
    CatalogEntry {
        id: "heisenberg",
        title: "Heisenberg group, Gabor case",
        note: "indicator of [-1/2, 1/2) with integer lattices is an orthonormal basis",
        problem: Problem {
            name: "heisenberg".into(),
            spec: Arc::new(spec),
            lambda: vec![1.0, 0.0],
            index_set: None,
            domain: Some(interval(-0.5, 0.5)),
            haar: HaarSource::MaurerCartan,
            defaults: Defaults {
                window: WindowRecipe::Indicator,
                cover: CoverRecipe::Lattice { step: vec![1.0] },
                frequency: FrequencyRecipe::Prescribed {
                    half_width: 0.5,
                    center: vec![0.0],
                    fundamental_domain: false,
                },
                region: interval(-1.5, 1.5),
                placement: PlacementRecipe::WithinTiles,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| vec![1.0, -t[0]]),
            theta: vec_fn(|t| vec![-t[0]]),
            theta_inverse: vec_fn(|x| vec![-x[0]]),
            weight: scalar_fn(|_| 1.0),
        },
    }
}

/// R acting on R² by rotations and on R by dilations, λ = X₂*.
fn solv_oscillator() -> CatalogEntry {
    let mut spec = LieSplitSpec::new("solv_oscillator", 3, 1);
    spec.set_bracket(3, 0, 1, 1.0);
    spec.set_bracket(3, 1, 0, -1.0);
    spec.set_bracket(3, 2, 2, 1.0);
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = Some(1);
    CatalogEntry {
        id: "solv_oscillator",
        title: "rotation-dilation solvable group",
        note: "f = cos t · b_1(4t/π)^{1/2} with Γ_H = Z is a frame with A = m√2, B = M√2",
        problem: Problem {
            name: "solv_oscillator".into(),
            spec: Arc::new(spec),
            lambda: vec![0.0, 1.0, 0.0],
            index_set: None,
            domain: Some(interval(-FRAC_PI_4, FRAC_PI_4)),
            haar: HaarSource::MaurerCartan,
            defaults: Defaults {
                window: WindowRecipe::PartitionOverWeight { degree: 1 },
                cover: CoverRecipe::Lattice { step: vec![1.0] },
                frequency: FrequencyRecipe::Prescribed {
                    half_width: SQRT_2 / 2.0,
                    center: vec![0.0],
                    fundamental_domain: false,
                },
                region: interval(-2.0, 2.0),
                placement: PlacementRecipe::Region,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| vec![-t[0].sin(), t[0].cos(), 0.0]),
            theta: vec_fn(|t| vec![-t[0].sin()]),
            theta_inverse: vec_fn(|x| vec![-x[0].asin()]),
            weight: scalar_fn(|x| 1.0 / (1.0 - x[0] * x[0]).sqrt()),
        },
    }
}

/// Shearlet group: [A₁, X₂] = X₁, [A₂, X_j] = X_j, λ = X₁*.
fn toeplitz_shearlet() -> CatalogEntry {
    let mut spec = LieSplitSpec::new("toeplitz_shearlet", 2, 2);
    spec.set_bracket(2, 1, 0, 1.0);
    spec.set_bracket(3, 0, 0, 1.0);
    spec.set_bracket(3, 1, 1, 1.0);
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = Some(1);
    CatalogEntry {
        id: "toeplitz_shearlet",
        title: "shearlet group",
        note: "spline Parseval window with the matched lattice gives A = B = 1",
        problem: Problem {
            name: "toeplitz_shearlet".into(),
            spec: Arc::new(spec),
            lambda: vec![1.0, 0.0],
            index_set: None,
            domain: Some(square(-1.0, 1.0)),
            haar: HaarSource::MaurerCartan,
            defaults: Defaults {
                window: WindowRecipe::SplineParseval { degree: 4 },
                cover: CoverRecipe::Matched,
                frequency: FrequencyRecipe::Computed,
                region: square(-2.0, 2.0),
                placement: PlacementRecipe::Region,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| {
                let e = (-t[1]).exp();
                vec![e, -e * t[0]]
            }),
            theta: vec_fn(|t| {
                let e = (-t[1]).exp();
                vec![e, -e * t[0]]
            }),
            theta_inverse: vec_fn(|x| vec![-x[1] / x[0], -x[0].ln()]),
            weight: scalar_fn(|x| 1.0 / (x[0] * x[0])),
        },
    }
}

/// G = gl(n) ⋊ K realized by block matrices [[k, X], [0, 0]], with λ(X) = tr X.
#[derive(Debug, Clone)]
pub struct Embedded {
    pub spec: LieSplitSpec,
    pub lambda: Vec<f64>,
    pub order: usize,
}

impl Embedded {
    /// β(h) = (h⁻¹)ᵀ flattened row by row, from the n×n block of h.
    pub fn beta_closed(&self, h: &DMatrix<f64>) -> Result<Vec<f64>> {
        let n = self.order;
        let block = h.view((0, 0), (n, n)).clone_owned();
        let inv = block
            .try_inverse()
            .ok_or_else(|| FrameError::ChartDegeneracy("singular group element".into()))?;
        let t = inv.transpose();
        Ok((0..n * n).map(|p| t[(p / n, p % n)]).collect())
    }
}

/// Builds gl(n) ⋊ K from a basis of the Lie algebra of K ⊂ GL(n).
pub fn embed_construction(name: &str, order: usize, k_basis: &[DMatrix<f64>]) -> Result<Embedded> {
    let n = order;
    let r = k_basis.len();
    if r > n * n {
        return Err(FrameError::InvalidSpec(format!("dim K = {r} exceeds n² = {}", n * n)));
    }
    if k_basis.iter().any(|m| m.nrows() != n || m.ncols() != n) {
        return Err(FrameError::InvalidSpec(format!("K basis matrices must be {n}×{n}")));
    }
    let size = 2 * n;
    let mut mats = Vec::with_capacity(n * n + r);
    for i in 0..n {
        for j in 0..n {
            let mut m = DMatrix::zeros(size, size);
            m[(i, n + j)] = 1.0;
            mats.push(m);
        }
    }
    for a in k_basis {
        let mut m = DMatrix::zeros(size, size);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        mats.push(m);
    }
    let mut spec = LieSplitSpec::from_realization(name, n * n, r, mats)?;
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = spec.compute_h_step();
    spec.h_solvable = h_is_solvable(&spec);
    spec.h_exponential = spec.h_nilpotency_step.is_some();
    let lambda = (0..n * n).map(|p| if p / n == p % n { 1.0 } else { 0.0 }).collect();
    Ok(Embedded { spec, lambda, order: n })
}

/// Whether the derived series of h reaches zero.
pub fn h_is_solvable(spec: &LieSplitSpec) -> bool {
    let r = spec.r_dim();
    let mut current: Vec<Vec<f64>> = (0..r)
        .map(|k| {
            let mut e = vec![0.0; r];
            e[k] = 1.0;
            e
        })
        .collect();
    for _ in 0..=r {
        if current.is_empty() {
            return true;
        }
        let mut gens = Vec::new();
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                gens.push(spec.h_bracket(a, b));
            }
        }
        if gens.is_empty() {
            return true;
        }
        let m = DMatrix::from_fn(r, gens.len(), |i, j| gens[j][i]);
        let rk = linalg::rank(&m, 1e-12);
        if rk == 0 {
            return true;
        }
        if rk >= current.len() {
            return false;
        }
        let u = m.svd(true, false).u.unwrap();
        current = (0..rk).map(|c| u.column(c).iter().cloned().collect()).collect();
    }
    false
}

/// Basis (rotation, diagonal, shear) of sl(2).
pub fn sl2_basis() -> Vec<DMatrix<f64>> {
    vec![
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
        DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
    ]
}

/// Basis (E₁₃, E₁₂, E₂₃) of the strictly upper triangular 3×3 matrices.
pub fn unitriangular3_basis() -> Vec<DMatrix<f64>> {
    let e = |i: usize, j: usize| {
        let mut m = DMatrix::zeros(3, 3);
        m[(i, j)] = 1.0;
        m
    };
    vec![e(0, 2), e(0, 1), e(1, 2)]
}

/// Entries of h⁻¹ for h = R(θ) diag(e^u, e^{-u}) N(s), returned as (h⁻¹)₂₁, (h⁻¹)₁₂, (h⁻¹)₂₂.
fn sl2_theta(t: &[f64]) -> Vec<f64> {
    let (th, u, s) = (t[0], t[1], t[2]);
    let (sn, cs) = th.sin_cos();
    let (eu, emu) = (u.exp(), (-u).exp());
    vec![-eu * sn, emu * sn - s * eu * cs, eu * cs]
}

/// SL(2, R) ⋉ gl(2) with the KAN chart (θ, u = ln a, s) and the declared density a⁻³ da.
fn sl2_embed() -> Result<CatalogEntry> {
    let emb = embed_construction("sl2_embed", 2, &sl2_basis())?;
    let lambda = emb.lambda.clone();
    Ok(CatalogEntry {
        id: "sl2_embed",
        title: "SL(2, R) acting on 2×2 matrices",
        note: "non-solvable H; frames come from a greedy cover and are verified on a bounded region",
        problem: Problem {
            name: "sl2_embed".into(),
            spec: Arc::new(emb.spec),
            lambda,
            index_set: Some(vec![1, 2, 3]),
            domain: None,
            haar: HaarSource::Closed {
                label: "a^-3 da".into(),
                density: Arc::new(|t: &[f64]| (-2.0 * t[1]).exp()),
            },
            defaults: Defaults {
                window: WindowRecipe::SplineParseval { degree: 4 },
                cover: CoverRecipe::Greedy { region_radius: 2.0, separation: 0.3 },
                frequency: FrequencyRecipe::Computed,
                region: CoordBox::symmetric(3, 1.0),
                placement: PlacementRecipe::Region,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| {
                let x = sl2_theta(t);
                let (sn, cs) = t[0].sin_cos();
                let emu = (-t[1]).exp();
                // (h⁻¹)₁₁ = e^{-u} cos θ + s e^u sin θ
                let a11 = emu * cs + t[2] * t[1].exp() * sn;
                vec![a11, x[0], x[1], x[2]]
            }),
            theta: vec_fn(sl2_theta),
            theta_inverse: vec_fn(|x| {
                let eu = x[0].hypot(x[2]);
                let th = (-x[0]).atan2(x[2]);
                let s = (th.sin() / eu - x[1]) / (eu * th.cos());
                vec![th, eu.ln(), s]
            }),
            weight: scalar_fn(|x| {
                let q = x[0] * x[0] + x[2] * x[2];
                1.0 / (x[2].abs() * q * q)
            }),
        },
    })
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// 4×4 realization: X_k = E_{k4}, A₁ = -(E₁₂ + E₂₃), A₂ = -E₁₃; λ = X₁*.
fn onb_step3() -> Result<CatalogEntry> {
    let mats = vec![
        unit(4, 0, 3),
        unit(4, 1, 3),
        unit(4, 2, 3),
        -(unit(4, 0, 1) + unit(4, 1, 2)),
        -unit(4, 0, 2),
    ];
    let mut spec = LieSplitSpec::from_realization("onb_step3", 3, 2, mats)?;
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = Some(1);
    Ok(CatalogEntry {
        id: "onb_step3",
        title: "step-three nilpotent group with an orthonormal basis",
        note: "indicator of [-1/2, 1/2)² with integer lattices is an orthonormal basis",
        problem: Problem {
            name: "onb_step3".into(),
            spec: Arc::new(spec),
            lambda: vec![1.0, 0.0, 0.0],
            index_set: None,
            domain: Some(square(-0.5, 0.5)),
            haar: HaarSource::MaurerCartan,
            defaults: Defaults {
                window: WindowRecipe::Indicator,
                cover: CoverRecipe::Lattice { step: vec![1.0, 1.0] },
                frequency: FrequencyRecipe::Prescribed {
                    half_width: 0.5,
                    center: vec![0.0, 0.0],
                    fundamental_domain: true,
                },
                region: square(-1.5, 1.5),
                placement: PlacementRecipe::WithinTiles,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| vec![1.0, t[0], t[1] + 0.5 * t[0] * t[0]]),
            theta: vec_fn(|t| vec![t[0], t[1] + 0.5 * t[0] * t[0]]),
            theta_inverse: vec_fn(|x| vec![x[0], x[1] - 0.5 * x[0] * x[0]]),
            weight: scalar_fn(|_| 1.0),
        },
    })
}

const LAMBDA_23: f64 = 2.0;

/// span{X₂} ⋉ span{X₃, X₁₂, X₁₃, X₂₃} inside the free step-two algebra on three generators.
fn free_nilpotent_step2() -> CatalogEntry {
    let mut spec = LieSplitSpec::new("free_nilpotent_step2", 4, 1);
    spec.set_bracket(4, 0, 3, 1.0);
    spec.n_nilpotency_step = Some(1);
    spec.h_nilpotency_step = Some(1);
    CatalogEntry {
        id: "free_nilpotent_step2",
        title: "free two-step nilpotent group, three generators",
        note: "1_[0,1) with Γ = exp(Z X₃ / λ₂₃) exp(Z X₂) is an orthonormal basis",
        problem: Problem {
            name: "free_nilpotent_step2".into(),
            spec: Arc::new(spec),
            lambda: vec![0.0, 0.0, 0.0, LAMBDA_23],
            index_set: None,
            domain: Some(interval(0.0, 1.0)),
            haar: HaarSource::MaurerCartan,
            defaults: Defaults {
                window: WindowRecipe::Indicator,
                cover: CoverRecipe::Lattice { step: vec![1.0] },
                frequency: FrequencyRecipe::Prescribed {
                    half_width: LAMBDA_23 / 2.0,
                    center: vec![-LAMBDA_23 / 2.0],
                    fundamental_domain: false,
                },
                region: interval(-1.0, 2.0),
                placement: PlacementRecipe::WithinTiles,
            },
        },
        closed: ClosedForms {
            beta: vec_fn(|t| vec![-LAMBDA_23 * t[0], 0.0, 0.0, LAMBDA_23]),
            theta: vec_fn(|t| vec![-LAMBDA_23 * t[0]]),
            theta_inverse: vec_fn(|x| vec![-x[0] / LAMBDA_23]),
            weight: scalar_fn(|_| 1.0 / LAMBDA_23),
        },
    }
}
