use nalgebra::DMatrix;
use serde::Serialize;

use crate::lie::LieSplitSpec;
use crate::linalg;

pub const IMMERSION_TOL: f64 = 1e-10;
const TIE_RTOL: f64 = 1e-12;

/// β_λ(h) = Ad(h⁻¹)*λ restricted to n, for h in second-kind coordinates.
///
/// `ad_n[k]` is ad(A_k)|_n.
pub fn beta(ad_n: &[DMatrix<f64>], lambda: &[f64], t: &[f64]) -> Vec<f64> {
    let mut row = nalgebra::RowDVector::from_row_slice(lambda);
    // β = λᵀ exp(-t_r ad_r)···exp(-t_1 ad_1); apply factors left to right.
    for k in (0..ad_n.len()).rev() {
        if t[k] != 0.0 {
            row *= linalg::expm(&(&ad_n[k] * (-t[k])));
        }
    }
    row.iter().cloned().collect()
}

/// ∂β/∂t_k as an n×r matrix.
pub fn beta_jacobian(ad_n: &[DMatrix<f64>], lambda: &[f64], t: &[f64]) -> DMatrix<f64> {
    let r = ad_n.len();
    let n = lambda.len();
    let factors: Vec<DMatrix<f64>> = (0..r).map(|k| linalg::expm(&(&ad_n[k] * (-t[k])))).collect();
    // Row vector λᵀ F_r ··· F_{k+1} (suffix from the left).
    let mut left = vec![nalgebra::RowDVector::from_row_slice(lambda)];
    for k in (0..r).rev() {
        let next = left.last().unwrap() * &factors[k];
        left.push(next);
    }
    // left[m] = λᵀ F_r ··· F_{r-m+1}
    let mut jac = DMatrix::<f64>::zeros(n, r);
    for k in 0..r {
        let prefix = &left[r - 1 - k];
        let mut row = prefix * (&ad_n[k] * -1.0) * &factors[k];
        for j in (0..k).rev() {
            row *= &factors[j];
        }
        for i in 0..n {
            jac[(i, k)] = row[i];
        }
    }
    jac
}

/// D_{jk} = ⟨λ, [X_j, A_k]⟩.
pub fn coadjoint_jacobian(spec: &LieSplitSpec, lambda: &[f64]) -> DMatrix<f64> {
    let (n, r) = (spec.n_dim(), spec.r_dim());
    DMatrix::from_fn(n, r, |j, k| (0..n).map(|i| lambda[i] * spec.c(j, n + k, i)).sum())
}

#[derive(Debug, Clone, Serialize)]
pub struct ImmersionReport {
    pub det_dtd: f64,
    pub threshold: f64,
    pub passes: bool,
}

/// det(DᵀD) > 1e-10 · ‖D‖_F^{2r}; vacuous for r = 0.
pub fn immersion_check(d: &DMatrix<f64>) -> ImmersionReport {
    let r = d.ncols();
    if r == 0 {
        return ImmersionReport { det_dtd: 1.0, threshold: 0.0, passes: true };
    }
    if d.nrows() < r {
        return ImmersionReport { det_dtd: 0.0, threshold: 0.0, passes: false };
    }
    let dtd = d.transpose() * d;
    let det = dtd.determinant();
    let fro = d.norm();
    let threshold = IMMERSION_TOL * fro.powi(2 * r as i32);
    ImmersionReport { det_dtd: det, threshold, passes: fro > 0.0 && det > threshold }
}

/// Rows of D whose r×r minor has maximal |det|; ties go to the lexicographically first set.
pub fn select_index_set(d: &DMatrix<f64>) -> Vec<usize> {
    let (n, r) = (d.nrows(), d.ncols());
    if r == 0 {
        return Vec::new();
    }
    if binomial(n, r) <= 50_000 {
        let mut best: Option<(f64, Vec<usize>)> = None;
        let mut subset: Vec<usize> = (0..r).collect();
        loop {
            let m = DMatrix::from_fn(r, r, |i, j| d[(subset[i], j)]);
            let v = m.determinant().abs();
            let better = match &best {
                None => true,
                Some((bv, _)) => v > bv * (1.0 + TIE_RTOL) && v > *bv,
            };
            if better {
                best = Some((v, subset.clone()));
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
        return best.unwrap().1;
    }
    // Column-pivoted elimination on Dᵀ for large n.
    let mut work = d.clone();
    let mut chosen = Vec::new();
    for k in 0..r {
        let mut piv = None;
        let mut pv = 0.0;
        for i in 0..n {
            if chosen.contains(&i) {
                continue;
            }
            let v = work[(i, k)].abs();
            if v > pv * (1.0 + TIE_RTOL) {
                pv = v;
                piv = Some(i);
            }
        }
        let p = match piv {
            Some(p) => p,
            None => break,
        };
        chosen.push(p);
        for i in 0..n {
            if i != p && work[(p, k)] != 0.0 {
                let f = work[(i, k)] / work[(p, k)];
                for c in k..r {
                    work[(i, c)] -= f * work[(p, c)];
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

fn binomial(n: usize, k: usize) -> usize {
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
