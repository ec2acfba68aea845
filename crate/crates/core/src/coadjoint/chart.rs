use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::beta::{beta, beta_jacobian, coadjoint_jacobian, immersion_check, select_index_set};
use crate::error::{FrameError, Result};
use crate::lie::{GroupModel, HaarMeasure, HaarSource, LieSplitSpec};
use crate::linalg;
use crate::sampling::CoordBox;

pub const NEWTON_TOL: f64 = 1e-12;
pub const INVERSE_RESIDUAL_TOL: f64 = 1e-10;
pub const MAX_NEWTON: usize = 50;
const SINGULAR_REL: f64 = 1e-6;
const MIN_RADIUS: f64 = 1e-6;
const SERIES_CUTOFF: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMethod {
    /// ρ(Θ⁻¹ξ) · |det Jac Θ⁻¹(ξ)| in the second-kind chart.
    Pushforward,
    /// Eigenvalue product of the exponential-chart Haar density.
    Eigen,
}

/// Options for building a [`ThetaChart`].
#[derive(Debug, Clone)]
pub struct ChartOptions {
    pub index_set: Option<Vec<usize>>,
    pub haar: HaarSource,
    pub domain: Option<CoordBox>,
    pub initial_radius: f64,
}

impl Default for ChartOptions {
    fn default() -> Self {
        ChartOptions { index_set: None, haar: HaarSource::MaurerCartan, domain: None, initial_radius: 1.0 }
    }
}

/// Θ_λ = P* ∘ β_λ ∘ φ⁻¹ restricted to the index set J, on a coordinate box O.
#[derive(Debug, Clone)]
pub struct ThetaChart {
    spec: Arc<LieSplitSpec>,
    lambda: Vec<f64>,
    index_set: Vec<usize>,
    group: GroupModel,
    haar: HaarMeasure,
    ad_n: Vec<DMatrix<f64>>,
    ad_h: Vec<DMatrix<f64>>,
    domain: CoordBox,
    scale: f64,
}

impl ThetaChart {
    pub fn build(spec: Arc<LieSplitSpec>, lambda: Vec<f64>, opts: ChartOptions) -> Result<Self> {
        let (n, r) = (spec.n_dim(), spec.r_dim());
        if lambda.len() != n {
            return Err(FrameError::DimensionMismatch { expected: n, got: lambda.len() });
        }
        let chr = spec.character_residual(&lambda);
        if chr > 1e-12 {
            return Err(FrameError::InvalidSpec(format!("λ is not a character of n (residual {chr:.3e})")));
        }
        let d = coadjoint_jacobian(&spec, &lambda);
        let imm = immersion_check(&d);
        if !imm.passes {
            return Err(FrameError::NotImmersion { det: imm.det_dtd });
        }
        let index_set = match opts.index_set {
            Some(j) => {
                if j.len() != r || j.iter().any(|&i| i >= n) {
                    return Err(FrameError::InvalidSpec(format!("index set {j:?} invalid for n = {n}, r = {r}")));
                }
                j
            }
            None => select_index_set(&d),
        };
        let group = GroupModel::from_spec(&spec)?;
        let haar = HaarMeasure::new(&spec, opts.haar);
        let ad_n = (0..r).map(|k| spec.ad_h_on_n(k)).collect();
        let ad_h = (0..r).map(|k| spec.ad_h_on_h(k)).collect();
        let mut chart = ThetaChart {
            spec,
            lambda,
            index_set,
            group,
            haar,
            ad_n,
            ad_h,
            domain: CoordBox::symmetric(r, opts.initial_radius),
            scale: 1.0,
        };
        let j0 = chart.theta_jacobian(&vec![0.0; r]);
        chart.scale = linalg::min_singular(&j0);
        if r > 0 && !(chart.scale > 0.0) {
            return Err(FrameError::ChartDegeneracy("Θ has singular Jacobian at the identity".into()));
        }
        chart.domain = match opts.domain {
            Some(b) => {
                if b.dim() != r {
                    return Err(FrameError::DimensionMismatch { expected: r, got: b.dim() });
                }
                b
            }
            None => chart.select_neighborhood(opts.initial_radius)?,
        };
        Ok(chart)
    }

    pub fn spec(&self) -> &Arc<LieSplitSpec> {
        &self.spec
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn index_set(&self) -> &[usize] {
        &self.index_set
    }

    pub fn group(&self) -> &GroupModel {
        &self.group
    }

    pub fn haar(&self) -> &HaarMeasure {
        &self.haar
    }

    pub fn domain(&self) -> &CoordBox {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.spec.r_dim()
    }

    /// σ_min of JacΘ at the identity.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// β_λ(φ⁻¹ t), all n components.
    pub fn beta(&self, t: &[f64]) -> Vec<f64> {
        beta(&self.ad_n, &self.lambda, t)
    }

    pub fn beta_jacobian(&self, t: &[f64]) -> DMatrix<f64> {
        beta_jacobian(&self.ad_n, &self.lambda, t)
    }

    pub fn theta(&self, t: &[f64]) -> Vec<f64> {
        let b = self.beta(t);
        self.index_set.iter().map(|&j| b[j]).collect()
    }

    pub fn theta_jacobian(&self, t: &[f64]) -> DMatrix<f64> {
        let bj = self.beta_jacobian(t);
        let r = self.dim();
        DMatrix::from_fn(r, r, |i, k| bj[(self.index_set[i], k)])
    }

    pub fn haar_density(&self, t: &[f64]) -> Result<f64> {
        self.haar.density(&self.group, t)
    }

    /// w(h) = W(Θ(h)) = ρ(h) / |det JacΘ(h)|.
    pub fn weight_at(&self, t: &[f64]) -> Result<f64> {
        let det = self.theta_jacobian(t).determinant().abs();
        if det < 1e-300 {
            return Err(FrameError::ChartDegeneracy(format!("det JacΘ = {det:.3e} at {t:?}")));
        }
        Ok(self.haar_density(t)? / det)
    }

    /// Newton inverse of Θ started at the identity, checked against the domain.
    pub fn invert(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let t = newton(|t| self.theta(t), |t| self.theta_jacobian(t), xi, &vec![0.0; self.dim()])?;
        let slack = 1e-9 * (1.0 + self.domain.lo.iter().chain(&self.domain.hi).fold(0.0f64, |m, x| m.max(x.abs())));
        if !self.domain.contains_closed(&t, slack) {
            return Err(FrameError::OutOfChart(format!("Θ⁻¹({xi:?}) = {t:?} lies outside O")));
        }
        Ok(t)
    }

    /// W_λ(ξ), the density of the pushforward of Haar measure on O under Θ.
    pub fn weight(&self, xi: &[f64], method: WeightMethod) -> Result<f64> {
        match method {
            WeightMethod::Pushforward => {
                let t = self.invert(xi)?;
                self.weight_at(&t)
            }
            WeightMethod::Eigen => self.weight_eigen(xi),
        }
    }

    /// Θ in exponential coordinates: Y ↦ P*(λ ∘ e^{-ad Y}|_n).
    pub fn theta_log(&self, y: &[f64]) -> Vec<f64> {
        let e = linalg::expm(&self.ad_n_of(y));
        let b = nalgebra::RowDVector::from_row_slice(&self.lambda) * e;
        self.index_set.iter().map(|&j| b[j]).collect()
    }

    pub fn theta_log_jacobian(&self, y: &[f64]) -> DMatrix<f64> {
        let r = self.dim();
        let a = self.ad_n_of(y);
        let lam = nalgebra::RowDVector::from_row_slice(&self.lambda);
        let mut jac = DMatrix::<f64>::zeros(r, r);
        for k in 0..r {
            let d = linalg::expm_frechet(&a, &(&self.ad_n[k] * -1.0));
            let row = &lam * d;
            for (i, &j) in self.index_set.iter().enumerate() {
                jac[(i, k)] = row[j];
            }
        }
        jac
    }

    fn ad_n_of(&self, y: &[f64]) -> DMatrix<f64> {
        let n = self.spec.n_dim();
        let mut a = DMatrix::<f64>::zeros(n, n);
        for (k, m) in self.ad_n.iter().enumerate() {
            a -= m * y[k];
        }
        a
    }

    fn weight_eigen(&self, xi: &[f64]) -> Result<f64> {
        if !self.spec.h_exponential {
            return Err(FrameError::Unsupported("eigen weight needs an exponential H".into()));
        }
        let r = self.dim();
        let y = newton(|y| self.theta_log(y), |y| self.theta_log_jacobian(y), xi, &vec![0.0; r])?;
        let mut m = DMatrix::<f64>::zeros(r, r);
        for (k, a) in self.ad_h.iter().enumerate() {
            m -= a * y[k];
        }
        let mut prod = num_complex::Complex64::new(1.0, 0.0);
        if r > 0 && linalg::max_abs(&m) > 0.0 {
            for w in m.complex_eigenvalues().iter() {
                let w = num_complex::Complex64::new(w.re, w.im);
                let v = if w.norm() < SERIES_CUTOFF {
                    1.0 + w / 2.0 + w * w / 6.0
                } else {
                    (w.exp() - 1.0) / w
                };
                prod *= v;
            }
        }
        let det = self.theta_log_jacobian(&y).determinant().abs();
        if det < 1e-300 {
            return Err(FrameError::ChartDegeneracy("singular exponential-chart Jacobian".into()));
        }
        Ok(prod.norm() / det)
    }

    /// Checks a candidate box on a 17^r grid (9^r for r > 3).
    pub fn check_domain(&self, b: &CoordBox) -> std::result::Result<(), String> {
        let r = self.dim();
        if r == 0 {
            return Ok(());
        }
        let m = if r <= 3 { 17 } else { 9 };
        let grid = b.grid(m);
        let mut images = Vec::with_capacity(grid.len());
        let mut sign = 0.0f64;
        for t in &grid {
            let jac = self.theta_jacobian(t);
            let smin = linalg::min_singular(&jac);
            if !(smin >= SINGULAR_REL * self.scale) {
                return Err(format!("Jacobian nearly singular at {t:?} (σ_min = {smin:.3e})"));
            }
            let det = jac.determinant();
            if sign == 0.0 {
                sign = det.signum();
            } else if det.signum() != sign {
                return Err(format!("det JacΘ changes sign at {t:?}"));
            }
            let xi = self.theta(t);
            if xi.iter().any(|x| !x.is_finite() || x.abs() > 1e12) {
                return Err(format!("Θ unbounded at {t:?}"));
            }
            images.push(xi);
        }
        let step = (0..r).map(|k| b.width(k) / (m - 1) as f64).fold(f64::INFINITY, f64::min);
        let mut order: Vec<usize> = (0..grid.len()).collect();
        order.sort_by(|&a, &c| images[a][0].partial_cmp(&images[c][0]).unwrap());
        for (pos, &a) in order.iter().enumerate() {
            for &c in &order[pos + 1..] {
                if images[c][0] - images[a][0] > 1e-9 {
                    break;
                }
                let dist_img = (0..r).map(|k| (images[a][k] - images[c][k]).abs()).fold(0.0, f64::max);
                let dist_pre = (0..r).map(|k| (grid[a][k] - grid[c][k]).abs()).fold(0.0, f64::max);
                if dist_img <= 1e-9 && dist_pre > step * 0.5 {
                    return Err(format!("Θ not injective: {:?} and {:?}", grid[a], grid[c]));
                }
            }
        }
        for (t, xi) in grid.iter().zip(&images) {
            match newton(|t| self.theta(t), |t| self.theta_jacobian(t), xi, &vec![0.0; r]) {
                Ok(back) => {
                    let err = back.iter().zip(t).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                    if err > 1e-8 * (1.0 + t.iter().fold(0.0f64, |m, x| m.max(x.abs()))) {
                        return Err(format!("Newton from the identity recovers {back:?} instead of {t:?}"));
                    }
                }
                Err(e) => return Err(format!("Newton fails at {t:?}: {e}")),
            }
        }
        Ok(())
    }

    /// Halves a symmetric box from `radius` until [`ThetaChart::check_domain`] passes.
    pub fn select_neighborhood(&self, radius: f64) -> Result<CoordBox> {
        let r = self.dim();
        let mut rad = radius;
        let mut last = String::new();
        while rad >= MIN_RADIUS {
            let b = CoordBox::symmetric(r, rad);
            match self.check_domain(&b) {
                Ok(()) => return Ok(b),
                Err(e) => last = e,
            }
            rad *= 0.5;
        }
        Err(FrameError::NoNeighborhood(format!("radius fell below {MIN_RADIUS:.0e}: {last}")))
    }

    /// Replaces the domain after checking it.
    pub fn with_domain(mut self, b: CoordBox) -> Result<Self> {
        self.check_domain(&b).map_err(FrameError::NoNeighborhood)?;
        self.domain = b;
        Ok(self)
    }
}

/// Damped Newton for f(t) = ξ from `start`.
pub fn newton<F, J>(f: F, jac: J, xi: &[f64], start: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
    J: Fn(&[f64]) -> DMatrix<f64>,
{
    let r = xi.len();
    let mut t = start.to_vec();
    let resid = |t: &[f64]| -> (Vec<f64>, f64) {
        let v: Vec<f64> = f(t).iter().zip(xi).map(|(a, b)| a - b).collect();
        let n = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        (v, n)
    };
    let (mut res, mut err) = resid(&t);
    for _ in 0..MAX_NEWTON {
        if err <= NEWTON_TOL {
            break;
        }
        let step = match jac(&t).lu().solve(&DVector::from_vec(res.clone())) {
            Some(s) => s,
            None => break,
        };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = (0..r).map(|k| t[k] - alpha * step[k]).collect();
            if trial.iter().all(|x| x.is_finite()) {
                let (tres, terr) = resid(&trial);
                if terr < err {
                    t = trial;
                    res = tres;
                    err = terr;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if err <= INVERSE_RESIDUAL_TOL {
        Ok(t)
    } else {
        Err(FrameError::NoConvergence { what: "chart inversion", iterations: MAX_NEWTON, residual: err })
    }
}
