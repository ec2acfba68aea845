//! Left Haar density of H in second-kind coordinates, normalized to 1 at the identity.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use super::group::GroupModel;
use super::spec::LieSplitSpec;
use crate::error::{FrameError, Result};
use crate::linalg;

pub const FD_STEP: f64 = 1e-6;
pub const DEGENERACY_TOL: f64 = 1e-12;

pub type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum HaarSource {
    /// |det[h⁻¹ ∂_k h]| from the ad-exponentials on h.
    MaurerCartan,
    /// 1 / |det ∂_y m(x, y)|_{y=0}| by central differences of the product.
    FiniteDifference,
    /// A density supplied in closed form.
    Closed { label: String, density: DensityFn },
}

impl fmt::Debug for HaarSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HaarSource::MaurerCartan => write!(f, "MaurerCartan"),
            HaarSource::FiniteDifference => write!(f, "FiniteDifference"),
            HaarSource::Closed { label, .. } => write!(f, "Closed({label})"),
        }
    }
}

impl HaarSource {
    pub fn label(&self) -> String {
        match self {
            HaarSource::MaurerCartan => "maurer-cartan".into(),
            HaarSource::FiniteDifference => "finite-difference".into(),
            HaarSource::Closed { label, .. } => format!("closed:{label}"),
        }
    }
}

/// Haar density evaluator bound to one group.
#[derive(Debug, Clone)]
pub struct HaarMeasure {
    pub source: HaarSource,
    ad_h: Vec<DMatrix<f64>>,
    abelian: bool,
}

impl HaarMeasure {
    pub fn new(spec: &LieSplitSpec, source: HaarSource) -> Self {
        let ad_h = (0..spec.r_dim()).map(|k| spec.ad_h_on_h(k)).collect();
        HaarMeasure { source, ad_h, abelian: spec.h_is_abelian() }
    }

    pub fn density(&self, group: &GroupModel, t: &[f64]) -> Result<f64> {
        match &self.source {
            HaarSource::Closed { density, .. } => Ok(density(t)),
            HaarSource::MaurerCartan => {
                if self.abelian {
                    return Ok(1.0);
                }
                maurer_cartan_density(&self.ad_h, t)
            }
            HaarSource::FiniteDifference => finite_difference_density(group, t),
        }
    }
}

/// Column k is Ad(exp(-t_r A_r)···exp(-t_{k+1} A_{k+1})) A_k.
pub fn maurer_cartan_density(ad_h: &[DMatrix<f64>], t: &[f64]) -> Result<f64> {
    let r = ad_h.len();
    let mut l = DMatrix::<f64>::zeros(r, r);
    let mut acc = DMatrix::<f64>::identity(r, r);
    for k in (0..r).rev() {
        l.column_mut(k).copy_from(&acc.column(k));
        acc *= linalg::expm(&(&ad_h[k] * (-t[k])));
    }
    let det = l.determinant().abs();
    if det < DEGENERACY_TOL {
        return Err(FrameError::ChartDegeneracy(format!("Maurer–Cartan determinant {det:.3e}")));
    }
    Ok(det)
}

pub fn finite_difference_density(group: &GroupModel, t: &[f64]) -> Result<f64> {
    let r = group.dim();
    let mut jac = DMatrix::<f64>::zeros(r, r);
    for k in 0..r {
        let mut yp = vec![0.0; r];
        let mut ym = vec![0.0; r];
        yp[k] = FD_STEP;
        ym[k] = -FD_STEP;
        let p = group.product(t, &yp)?;
        let m = group.product(t, &ym)?;
        for i in 0..r {
            jac[(i, k)] = (p[i] - m[i]) / (2.0 * FD_STEP);
        }
    }
    let det = jac.determinant().abs();
    if det < DEGENERACY_TOL {
        return Err(FrameError::ChartDegeneracy(format!("left-translation Jacobian {det:.3e}")));
    }
    Ok(1.0 / det)
}
