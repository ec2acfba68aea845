//! Group law of H in second-kind coordinates a ↦ exp(a_1 A_1)···exp(a_r A_r).

use nalgebra::{DMatrix, DVector};

use super::spec::{LieSplitSpec, MAX_BCH_STEP};
use crate::error::{FrameError, Result};
use crate::linalg;

pub const NEWTON_MAX_ITER: usize = 50;

/// A point of H in second-kind coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPoint(pub Vec<f64>);

impl GroupPoint {
    pub fn identity(r: usize) -> Self {
        GroupPoint(vec![0.0; r])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// How products are evaluated.
#[derive(Debug, Clone)]
pub enum GroupModel {
    /// h abelian: coordinates add.
    Abelian { dim: usize },
    /// h nilpotent without realization: truncated BCH.
    Bch(BchLaw),
    /// Matrix multiplication followed by coordinate recovery.
    Matrix(MatrixLaw),
}

#[derive(Debug, Clone)]
pub struct BchLaw {
    dim: usize,
    step: usize,
    constants: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MatrixLaw {
    mats: Vec<DMatrix<f64>>,
}

impl GroupModel {
    /// Picks the cheapest exact law the spec supports.
    pub fn from_spec(spec: &LieSplitSpec) -> Result<Self> {
        let r = spec.r_dim();
        if spec.h_is_abelian() {
            return Ok(GroupModel::Abelian { dim: r });
        }
        if let Some(mats) = &spec.realization {
            return Ok(GroupModel::Matrix(MatrixLaw { mats: mats[spec.n_dim()..].to_vec() }));
        }
        match spec.compute_h_step() {
            Some(step) if step <= MAX_BCH_STEP => {
                let mut constants = vec![0.0; r * r * r];
                let n = spec.n_dim();
                for i in 0..r {
                    for j in 0..r {
                        for k in 0..r {
                            constants[(i * r + j) * r + k] = spec.c(n + i, n + j, n + k);
                        }
                    }
                }
                Ok(GroupModel::Bch(BchLaw { dim: r, step, constants }))
            }
            _ => Err(FrameError::Unsupported(
                "group product for non-nilpotent h needs a matrix realization".into(),
            )),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            GroupModel::Abelian { dim } => *dim,
            GroupModel::Bch(b) => b.dim,
            GroupModel::Matrix(m) => m.mats.len(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupModel::Abelian { .. })
    }

    pub fn product(&self, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
        match self {
            GroupModel::Abelian { .. } => Ok(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            GroupModel::Bch(law) => {
                let z = law.bch(&law.log_of(a), &law.log_of(b));
                let guess: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                law.second_kind_of(&z, &guess)
            }
            GroupModel::Matrix(law) => {
                let ma = law.to_matrix(a);
                let m = &ma * law.to_matrix(b);
                let guess: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                law.coords_of(&m, &guess).or_else(|_| {
                    // Continue from a along s ↦ a · (s b).
                    law.continuation(|s| &ma * law.to_matrix(&scaled(b, s)), a)
                })
            }
        }
    }

    pub fn inverse(&self, a: &[f64]) -> Result<Vec<f64>> {
        match self {
            GroupModel::Abelian { .. } => Ok(a.iter().map(|x| -x).collect()),
            GroupModel::Bch(law) => {
                let z: Vec<f64> = law.log_of(a).iter().map(|x| -x).collect();
                let guess: Vec<f64> = a.iter().map(|x| -x).collect();
                law.second_kind_of(&z, &guess)
            }
            GroupModel::Matrix(law) => {
                let m = law
                    .to_matrix(a)
                    .try_inverse()
                    .ok_or_else(|| FrameError::ChartDegeneracy("singular group matrix".into()))?;
                let guess: Vec<f64> = a.iter().map(|x| -x).collect();
                law.coords_of(&m, &guess).or_else(|_| {
                    let zero = vec![0.0; a.len()];
                    law.continuation(
                        |s| law.to_matrix(&scaled(a, s)).try_inverse().unwrap_or_else(|| m.clone()),
                        &zero,
                    )
                })
            }
        }
    }

    /// `a·b` when it lies in the box `lo..hi`, `None` otherwise.
    ///
    /// For matrix laws the recovery starts from the nearest of a few box points instead of
    /// continuing along a path, so a far product that leaves the chart costs one failed solve.
    pub fn product_within(&self, a: &[f64], b: &[f64], lo: &[f64], hi: &[f64]) -> Result<Option<Vec<f64>>> {
        let inside = |y: &[f64]| y.iter().zip(lo.iter().zip(hi)).all(|(x, (l, h))| *x >= *l && *x < *h);
        match self {
            GroupModel::Matrix(law) => {
                let m = law.to_matrix(a) * law.to_matrix(b);
                let mut best: Option<(f64, Vec<f64>)> = None;
                for g in box_seeds(lo, hi) {
                    let d = (law.to_matrix(&g) - &m).norm();
                    if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                        best = Some((d, g));
                    }
                }
                let guess = best.map(|(_, g)| g).unwrap_or_else(|| vec![0.0; lo.len()]);
                match law.coords_of(&m, &guess) {
                    Ok(y) => Ok(inside(&y).then_some(y)),
                    Err(FrameError::NoConvergence { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            }
            _ => {
                let y = self.product(a, b)?;
                Ok(inside(&y).then_some(y))
            }
        }
    }

    /// Matrix form of a point when a realization is available.
    pub fn to_matrix(&self, a: &[f64]) -> Option<DMatrix<f64>> {
        match self {
            GroupModel::Matrix(law) => Some(law.to_matrix(a)),
            _ => None,
        }
    }

    pub fn from_matrix(&self, m: &DMatrix<f64>) -> Result<Vec<f64>> {
        match self {
            GroupModel::Matrix(law) => law.coords_of(m, &vec![0.0; law.mats.len()]),
            _ => Err(FrameError::Unsupported("no matrix realization".into())),
        }
    }
}

impl MatrixLaw {
    pub fn to_matrix(&self, a: &[f64]) -> DMatrix<f64> {
        let m = self.mats[0].nrows();
        let mut acc = DMatrix::<f64>::identity(m, m);
        for (k, mk) in self.mats.iter().enumerate() {
            if a[k] != 0.0 {
                acc *= linalg::expm(&(mk * a[k]));
            }
        }
        acc
    }

    /// Coordinates of path(1), tracking path(s) from the known coordinates `start` of path(0).
    fn continuation<P>(&self, path: P, start: &[f64]) -> Result<Vec<f64>>
    where
        P: Fn(f64) -> DMatrix<f64>,
    {
        let mut last = Err(FrameError::NoConvergence { what: "coordinate continuation", iterations: 0, residual: f64::NAN });
        for steps in [8usize, 32, 128] {
            let mut c = start.to_vec();
            let mut ok = true;
            for i in 1..=steps {
                match self.coords_of(&path(i as f64 / steps as f64), &c) {
                    Ok(next) => c = next,
                    Err(e) => {
                        last = Err(e);
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(c);
            }
        }
        last
    }

    /// Gauss–Newton recovery of second-kind coordinates of `target`.
    fn coords_of(&self, target: &DMatrix<f64>, guess: &[f64]) -> Result<Vec<f64>> {
        let r = self.mats.len();
        let m = target.nrows();
        let scale = linalg::max_abs(target).max(1.0);
        let mut c = guess.to_vec();
        let mut res = self.to_matrix(&c) - target;
        let mut err = linalg::max_abs(&res);
        for _ in 0..NEWTON_MAX_ITER {
            if err <= 1e-14 * scale {
                return Ok(c);
            }
            let factors: Vec<DMatrix<f64>> =
                (0..r).map(|k| linalg::expm(&(&self.mats[k] * c[k]))).collect();
            let mut jac = DMatrix::<f64>::zeros(m * m, r);
            let mut prefix = DMatrix::<f64>::identity(m, m);
            for k in 0..r {
                prefix *= &factors[k];
                let mut col = &prefix * &self.mats[k];
                for f in &factors[k + 1..] {
                    col *= f;
                }
                jac.column_mut(k).copy_from_slice(col.as_slice());
            }
            let rhs = DVector::from_column_slice(res.as_slice());
            let step = jac
                .svd(true, true)
                .solve(&rhs, 1e-15)
                .map_err(|e| FrameError::ChartDegeneracy(e.to_string()))?;
            let mut alpha = 1.0;
            loop {
                let trial: Vec<f64> = c.iter().zip(step.iter()).map(|(x, d)| x - alpha * d).collect();
                let tres = self.to_matrix(&trial) - target;
                let terr = linalg::max_abs(&tres);
                if terr < err || alpha < 1e-4 {
                    c = trial;
                    res = tres;
                    err = terr;
                    break;
                }
                alpha *= 0.5;
            }
        }
        if err <= 1e-11 * scale {
            Ok(c)
        } else {
            Err(FrameError::NoConvergence {
                what: "second-kind coordinate recovery",
                iterations: NEWTON_MAX_ITER,
                residual: err,
            })
        }
    }
}

impl BchLaw {
    fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let r = self.dim;
        let mut out = vec![0.0; r];
        for i in 0..r {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..r {
                if y[j] == 0.0 {
                    continue;
                }
                let s = x[i] * y[j];
                for k in 0..r {
                    out[k] += s * self.constants[(i * r + j) * r + k];
                }
            }
        }
        out
    }

    /// log(exp x exp y), exact for nilpotency step ≤ 4.
    pub fn bch(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        if self.step < 2 {
            return z;
        }
        let xy = self.bracket(x, y);
        axpy(&mut z, 0.5, &xy);
        if self.step >= 3 {
            let xxy = self.bracket(x, &xy);
            let yxy = self.bracket(y, &xy);
            axpy(&mut z, 1.0 / 12.0, &xxy);
            axpy(&mut z, -1.0 / 12.0, &yxy);
            if self.step >= 4 {
                let yxxy = self.bracket(y, &xxy);
                axpy(&mut z, -1.0 / 24.0, &yxxy);
            }
        }
        z
    }

    /// First-kind coordinates of a second-kind point.
    fn log_of(&self, a: &[f64]) -> Vec<f64> {
        let r = self.dim;
        let mut z = vec![0.0; r];
        for k in 0..r {
            let mut e = vec![0.0; r];
            e[k] = a[k];
            z = self.bch(&z, &e);
        }
        z
    }

    fn second_kind_of(&self, z: &[f64], guess: &[f64]) -> Result<Vec<f64>> {
        let r = self.dim;
        let mut c = guess.to_vec();
        let scale = z.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let mut err = f64::INFINITY;
        for _ in 0..NEWTON_MAX_ITER {
            let f: Vec<f64> = self.log_of(&c).iter().zip(z).map(|(a, b)| a - b).collect();
            err = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if err <= 1e-14 * scale {
                return Ok(c);
            }
            let h = 1e-6;
            let mut jac = DMatrix::<f64>::zeros(r, r);
            for k in 0..r {
                let mut cp = c.clone();
                let mut cm = c.clone();
                cp[k] += h;
                cm[k] -= h;
                let lp = self.log_of(&cp);
                let lm = self.log_of(&cm);
                for i in 0..r {
                    jac[(i, k)] = (lp[i] - lm[i]) / (2.0 * h);
                }
            }
            let step = jac
                .lu()
                .solve(&DVector::from_vec(f))
                .ok_or_else(|| FrameError::ChartDegeneracy("singular BCH Jacobian".into()))?;
            for k in 0..r {
                c[k] -= step[k];
            }
        }
        if err <= 1e-11 * scale {
            Ok(c)
        } else {
            Err(FrameError::NoConvergence { what: "BCH coordinate recovery", iterations: NEWTON_MAX_ITER, residual: err })
        }
    }
}

fn axpy(z: &mut [f64], a: f64, x: &[f64]) {
    for (zi, xi) in z.iter_mut().zip(x) {
        *zi += a * xi;
    }
}

/// Corners, face centres and centre of a box: 3^r points.
fn box_seeds(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let vals = [*l, 0.5 * (l + h), *h];
        out = out.into_iter().flat_map(|p| vals.iter().map(move |v| [p.clone(), vec![*v]].concat())).collect();
    }
    out
}

fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}
