//! Structure constants, validation and group laws.

use nalgebra::DMatrix;

use lieframe::lie::{GroupModel, LieSplitSpec};

fn axb() -> LieSplitSpec {
    let mut s = LieSplitSpec::new("axb", 1, 1);
    s.set_bracket(1, 0, 0, 1.0);
    s
}

#[test]
fn axb_is_valid() {
    let rep = axb().validate();
    assert!(rep.is_valid(), "{:?}", rep.violations);
    assert_eq!(rep.h_step, Some(1));
}

#[test]
fn broken_antisymmetry_reported() {
    let mut s = axb();
    s.set_raw(0, 1, 0, 1.0);
    let rep = s.validate();
    assert!(rep.violations.iter().any(|v| v.contains("antisymmetry")));
}

#[test]
fn non_ideal_reported() {
    let mut s = axb();
    s.set_bracket(1, 0, 1, 0.5);
    assert!(s.validate().violations.iter().any(|v| v.contains("ideal")));
}

#[test]
fn realization_recovers_constants() {
    // X = E12, A = diag(1, 0): [A, X] = X.
    let x = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let s = LieSplitSpec::from_realization("axb", 1, 1, vec![x, a]).unwrap();
    assert!((s.c(1, 0, 0) - 1.0).abs() < 1e-14);
    assert!((s.c(0, 1, 0) + 1.0).abs() < 1e-14);
    assert!(s.validate().is_valid());
}

#[test]
fn non_nilpotent_h_needs_realization() {
    // h = ax+b algebra acting trivially on n = R.
    let mut s = LieSplitSpec::new("h-axb", 1, 2);
    s.set_bracket(2, 1, 1, 1.0);
    let rep = s.validate();
    assert_eq!(rep.h_step, None);
    assert!(!rep.is_valid());
}

/// Heisenberg h with basis (Z, Y, X), [X, Y] = Z, acting trivially on n = R.
fn heis_h(with_realization: bool) -> LieSplitSpec {
    if with_realization {
        let e = |i: usize, j: usize| {
            let mut m = DMatrix::<f64>::zeros(4, 4);
            m[(i, j)] = 1.0;
            m
        };
        // n = E44 commutes with the strictly upper 3x3 block.
        let mats = vec![e(3, 3), e(0, 2), e(1, 2), e(0, 1)];
        LieSplitSpec::from_realization("heis", 1, 3, mats).unwrap()
    } else {
        let mut s = LieSplitSpec::new("heis", 1, 3);
        s.set_bracket(3, 2, 1, 1.0);
        s
    }
}

#[test]
fn heisenberg_law_by_bch() {
    let s = heis_h(false);
    let g = GroupModel::from_spec(&s).unwrap();
    assert!(matches!(g, GroupModel::Bch(_)));
    let (v, t) = ([0.3, -1.1], 0.7);
    let (w, u) = ([2.0, 0.4], -0.2);
    let p = g.product(&[v[0], v[1], t], &[w[0], w[1], u]).unwrap();
    let want = [v[0] + w[0] + t * w[1], v[1] + w[1], t + u];
    for k in 0..3 {
        assert!((p[k] - want[k]).abs() < 1e-12, "{p:?}");
    }
}

#[test]
fn bch_and_matrix_agree() {
    let gb = GroupModel::from_spec(&heis_h(false)).unwrap();
    let gm = GroupModel::from_spec(&heis_h(true)).unwrap();
    assert!(matches!(gm, GroupModel::Matrix(_)));
    let a = [0.5, -0.3, 1.2];
    let b = [-0.7, 0.9, 0.4];
    let pb = gb.product(&a, &b).unwrap();
    let pm = gm.product(&a, &b).unwrap();
    for k in 0..3 {
        assert!((pb[k] - pm[k]).abs() < 1e-10);
    }
    let ib = gb.inverse(&a).unwrap();
    let e = gb.product(&ib, &a).unwrap();
    assert!(e.iter().all(|x| x.abs() < 1e-12));
}

#[test]
fn matrix_round_trip() {
    let gm = GroupModel::from_spec(&heis_h(true)).unwrap();
    let a = [0.25, -1.5, 0.8];
    let m = gm.to_matrix(&a).unwrap();
    let back = gm.from_matrix(&m).unwrap();
    for k in 0..3 {
        assert!((back[k] - a[k]).abs() < 1e-9);
    }
}
