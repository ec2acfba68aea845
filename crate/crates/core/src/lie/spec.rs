use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{FrameError, Result};
use crate::linalg;

/// Structure constants of g = n ⊕ h in the basis (X_1..X_n, A_1..A_r).
///
/// Indices are 0-based: basis element `i < n` is X_{i+1}, `n + k` is A_{k+1}.
#[derive(Debug, Clone)]
pub struct LieSplitSpec {
    pub name: String,
    n_dim: usize,
    r_dim: usize,
    constants: Vec<f64>,
    pub realization: Option<Vec<DMatrix<f64>>>,
    pub n_nilpotency_step: Option<usize>,
    pub h_nilpotency_step: Option<usize>,
    pub h_solvable: bool,
    pub h_exponential: bool,
}

/// Outcome of [`LieSplitSpec::validate`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub antisymmetry_residual: f64,
    pub jacobi_residual: f64,
    pub ideal_residual: f64,
    pub realization_residual: Option<f64>,
    pub h_step: Option<usize>,
    pub h_abelian: bool,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const JACOBI_TOL: f64 = 1e-12;
pub const REALIZATION_TOL: f64 = 1e-10;
/// Largest h nilpotency step the BCH product handles without a realization.
pub const MAX_BCH_STEP: usize = 4;

impl LieSplitSpec {
    pub fn new(name: impl Into<String>, n_dim: usize, r_dim: usize) -> Self {
        let d = n_dim + r_dim;
        LieSplitSpec {
            name: name.into(),
            n_dim,
            r_dim,
            constants: vec![0.0; d * d * d],
            realization: None,
            n_nilpotency_step: None,
            h_nilpotency_step: None,
            h_solvable: true,
            h_exponential: true,
        }
    }

    /// Builds the constants from a faithful matrix realization, one matrix per basis element.
    pub fn from_realization(
        name: impl Into<String>,
        n_dim: usize,
        r_dim: usize,
        mats: Vec<DMatrix<f64>>,
    ) -> Result<Self> {
        let d = n_dim + r_dim;
        if mats.len() != d {
            return Err(FrameError::DimensionMismatch { expected: d, got: mats.len() });
        }
        let m = mats[0].nrows();
        let mut basis = DMatrix::<f64>::zeros(m * m, d);
        for (k, e) in mats.iter().enumerate() {
            if e.nrows() != m || e.ncols() != m {
                return Err(FrameError::InvalidSpec("realization matrices differ in size".into()));
            }
            basis.column_mut(k).copy_from_slice(e.as_slice());
        }
        if linalg::rank(&basis, 1e-12) < d {
            return Err(FrameError::InvalidSpec("realization matrices are linearly dependent".into()));
        }
        let svd = basis.clone().svd(true, true);
        let mut spec = LieSplitSpec::new(name, n_dim, r_dim);
        for i in 0..d {
            for j in 0..d {
                let br = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                let rhs = DVector::from_column_slice(br.as_slice());
                let coef = svd
                    .solve(&rhs, 1e-14)
                    .map_err(|e| FrameError::InvalidSpec(e.to_string()))?;
                for k in 0..d {
                    let v = coef[k];
                    // Snap least-squares noise on integer constants.
                    let v = if (v - v.round()).abs() < 1e-12 { v.round() } else { v };
                    spec.constants[(i * d + j) * d + k] = v;
                }
            }
        }
        spec.realization = Some(mats);
        Ok(spec)
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn r_dim(&self) -> usize {
        self.r_dim
    }

    pub fn dim(&self) -> usize {
        self.n_dim + self.r_dim
    }

    /// c_{ij}^k.
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.constants[(i * d + j) * d + k]
    }

    /// Sets [E_i, E_j] += v E_k and the antisymmetric partner.
    pub fn set_bracket(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dim();
        self.constants[(i * d + j) * d + k] = v;
        self.constants[(j * d + i) * d + k] = -v;
    }

    /// Sets a single stored constant without touching its partner.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let d = self.dim();
        self.constants[(i * d + j) * d + k] = v;
    }

    /// Nonzero stored constants as (i, j, k, value), 0-based.
    pub fn nonzero_constants(&self) -> Vec<(usize, usize, usize, f64)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = self.c(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0.0 {
                    continue;
                }
                let s = x[i] * y[j];
                let base = (i * d + j) * d;
                for k in 0..d {
                    out[k] += s * self.constants[base + k];
                }
            }
        }
        out
    }

    /// Matrix of ad_x on g; column j is [x, E_j].
    pub fn ad_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim();
        let mut m = DMatrix::<f64>::zeros(d, d);
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            let col = self.bracket(x, &e);
            for k in 0..d {
                m[(k, j)] = col[k];
            }
        }
        m
    }

    /// exp(t ad_x) on g.
    pub fn ad_exp(&self, x: &[f64], t: f64) -> DMatrix<f64> {
        linalg::expm(&(self.ad_matrix(x) * t))
    }

    /// ad(A_k) restricted to n, as an n×n matrix.
    pub fn ad_h_on_n(&self, k: usize) -> DMatrix<f64> {
        let n = self.n_dim;
        let a = self.n_dim + k;
        DMatrix::from_fn(n, n, |row, col| self.c(a, col, row))
    }

    /// ad(A_k) restricted to h, as an r×r matrix.
    pub fn ad_h_on_h(&self, k: usize) -> DMatrix<f64> {
        let (n, r) = (self.n_dim, self.r_dim);
        let a = n + k;
        DMatrix::from_fn(r, r, |row, col| self.c(a, n + col, n + row))
    }

    /// Bracket on h in h-coordinates.
    pub fn h_bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.n_dim;
        let mut xx = vec![0.0; self.dim()];
        let mut yy = vec![0.0; self.dim()];
        xx[n..].copy_from_slice(x);
        yy[n..].copy_from_slice(y);
        self.bracket(&xx, &yy)[n..].to_vec()
    }

    pub fn h_is_abelian(&self) -> bool {
        let n = self.n_dim;
        let d = self.dim();
        (n..d).all(|i| (n..d).all(|j| (0..d).all(|k| self.c(i, j, k) == 0.0)))
    }

    /// Nilpotency step of h from its lower central series (None if not nilpotent).
    pub fn compute_h_step(&self) -> Option<usize> {
        let r = self.r_dim;
        if r == 0 {
            return Some(0);
        }
        let mut current: Vec<Vec<f64>> = (0..r)
            .map(|k| {
                let mut e = vec![0.0; r];
                e[k] = 1.0;
                e
            })
            .collect();
        let mut prev_rank = r;
        for step in 1..=r + 1 {
            let mut gens = Vec::new();
            for k in 0..r {
                let mut a = vec![0.0; r];
                a[k] = 1.0;
                for v in &current {
                    gens.push(self.h_bracket(&a, v));
                }
            }
            let m = DMatrix::from_fn(r, gens.len(), |i, j| gens[j][i]);
            let rk = linalg::rank(&m, 1e-12);
            if rk == 0 || linalg::max_abs(&m) < 1e-14 {
                return Some(step);
            }
            if rk >= prev_rank {
                return None;
            }
            let svd = m.svd(true, false);
            let u = svd.u.unwrap();
            current = (0..rk).map(|c| u.column(c).iter().cloned().collect()).collect();
            prev_rank = rk;
        }
        None
    }

    /// Checks antisymmetry, Jacobi, the ideal property, realization and product support.
    pub fn validate(&self) -> ValidationReport {
        let d = self.dim();
        let n = self.n_dim;
        let mut violations = Vec::new();

        let mut anti = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    anti = anti.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        if anti > 0.0 {
            violations.push(format!("antisymmetry violated (max |c_ij^k + c_ji^k| = {anti:.3e})"));
        }

        let mut jac = 0.0f64;
        let basis: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                e
            })
            .collect();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let t1 = self.bracket(&basis[i], &self.bracket(&basis[j], &basis[k]));
                    let t2 = self.bracket(&basis[j], &self.bracket(&basis[k], &basis[i]));
                    let t3 = self.bracket(&basis[k], &self.bracket(&basis[i], &basis[j]));
                    for m in 0..d {
                        jac = jac.max((t1[m] + t2[m] + t3[m]).abs());
                    }
                }
            }
        }
        if jac > JACOBI_TOL {
            violations.push(format!("Jacobi identity residual {jac:.3e} exceeds {JACOBI_TOL:.0e}"));
        }

        let mut ideal = 0.0f64;
        for i in 0..d {
            for j in 0..n {
                for k in n..d {
                    ideal = ideal.max(self.c(i, j, k).abs());
                }
            }
        }
        if ideal > 0.0 {
            violations.push(format!("n is not an ideal (h-component {ideal:.3e} in [g, n])"));
        }

        let realization_residual = self.realization.as_ref().map(|mats| {
            let mut res = 0.0f64;
            if mats.len() != d {
                return f64::INFINITY;
            }
            for i in 0..d {
                for j in 0..d {
                    let mut m = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                    for k in 0..d {
                        let c = self.c(i, j, k);
                        if c != 0.0 {
                            m -= &mats[k] * c;
                        }
                    }
                    res = res.max(linalg::max_abs(&m));
                }
            }
            res
        });
        if let Some(res) = realization_residual {
            if !(res <= REALIZATION_TOL) {
                violations.push(format!("matrix realization residual {res:.3e} exceeds {REALIZATION_TOL:.0e}"));
            }
        }

        let h_abelian = self.h_is_abelian();
        let h_step = self.compute_h_step();
        if let (Some(declared), Some(actual)) = (self.h_nilpotency_step, h_step) {
            if declared < actual {
                violations.push(format!("declared h nilpotency step {declared} below actual {actual}"));
            }
        }
        if self.h_nilpotency_step.is_some() && h_step.is_none() {
            violations.push("h declared nilpotent but its lower central series does not vanish".into());
        }
        if !h_abelian && self.realization.is_none() {
            match h_step {
                Some(s) if s <= MAX_BCH_STEP => {}
                Some(s) => violations.push(format!(
                    "h has nilpotency step {s} > {MAX_BCH_STEP}; provide a matrix realization"
                )),
                None => violations.push(
                    "non-nilpotent h requires a matrix realization for the group product".into(),
                ),
            }
        }

        ValidationReport {
            antisymmetry_residual: anti,
            jacobi_residual: jac,
            ideal_residual: ideal,
            realization_residual,
            h_step,
            h_abelian,
            violations,
        }
    }

    /// Validates and converts violations into an error.
    pub fn validated(self) -> Result<Self> {
        let rep = self.validate();
        if rep.is_valid() {
            Ok(self)
        } else {
            Err(FrameError::InvalidSpec(rep.violations.join("; ")))
        }
    }

    /// max |⟨λ, [X_i, X_j]⟩|; zero when λ is a character of n.
    pub fn character_residual(&self, lambda: &[f64]) -> f64 {
        let n = self.n_dim;
        let mut res = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| lambda[k] * self.c(i, j, k)).sum();
                res = res.max(s.abs());
            }
        }
        res
    }
}
