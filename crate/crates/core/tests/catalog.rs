//! Catalog entries and the matrix-group embedding.

use nalgebra::DMatrix;

use lieframe::catalog::{all_entries, embed_construction, get_entry, sl2_basis, unitriangular3_basis};
use lieframe::FrameError;

#[test]
fn every_entry_validates() {
    for e in all_entries().unwrap() {
        let rep = e.problem.spec.validate();
        assert!(rep.is_valid(), "{}: {:?}", e.id, rep.violations);
    }
}

#[test]
fn onb_brackets_match_realization() {
    let e = get_entry("onb_step3").unwrap();
    let s = &e.problem.spec;
    // [A₁, X₂] = -X₁, [A₁, X₃] = -X₂, [A₂, X₃] = -X₁
    assert_eq!(s.c(3, 1, 0), -1.0);
    assert_eq!(s.c(3, 2, 1), -1.0);
    assert_eq!(s.c(4, 2, 0), -1.0);
    assert!(s.h_is_abelian());
}

#[test]
fn embed_rejects_oversized_k() {
    let basis: Vec<DMatrix<f64>> = (0..5).map(|k| DMatrix::from_element(2, 2, k as f64)).collect();
    assert!(matches!(embed_construction("x", 2, &basis), Err(FrameError::InvalidSpec(_))));
}

#[test]
fn sl2_is_not_solvable_and_unitriangular_is() {
    let e = embed_construction("sl2", 2, &sl2_basis()).unwrap();
    assert!(!e.spec.h_solvable);
    let u = embed_construction("u3", 3, &unitriangular3_basis()).unwrap();
    assert!(u.spec.h_solvable);
    assert_eq!(u.spec.n_dim(), 9);
}

#[test]
fn unknown_id() {
    assert!(matches!(get_entry("nope"), Err(FrameError::UnknownCatalog(_))));
}

#[test]
fn embedded_groups_pass_validation_and_immersion() {
    use lieframe::coadjoint::{coadjoint_jacobian, immersion_check};
    for (order, basis) in [(3, unitriangular3_basis()), (2, sl2_basis())] {
        let e = embed_construction("k", order, &basis).unwrap();
        assert!(e.spec.validate().is_valid());
        assert_eq!(e.spec.r_dim(), basis.len());
        assert_eq!(e.spec.n_dim(), order * order);
        assert!(immersion_check(&coadjoint_jacobian(&e.spec, &e.lambda)).passes);
    }
}

#[test]
fn trivial_k_is_vacuously_immersed() {
    use lieframe::coadjoint::{coadjoint_jacobian, immersion_check};
    let e = embed_construction("trivial", 2, &[]).unwrap();
    let d = coadjoint_jacobian(&e.spec, &e.lambda);
    assert_eq!(d.ncols(), 0);
    assert!(immersion_check(&d).passes);
}

#[test]
fn embedded_beta_is_inverse_transpose() {
    use lieframe::coadjoint::{ChartOptions, ThetaChart};
    use std::sync::Arc;
    let e = embed_construction("u3", 3, &unitriangular3_basis()).unwrap();
    let chart = ThetaChart::build(Arc::new(e.spec.clone()), e.lambda.clone(), ChartOptions::default()).unwrap();
    for t in [[0.3, -0.5, 0.8], [-1.2, 0.4, 0.1], [0.0, 0.0, 0.0]] {
        let h = chart.group().to_matrix(&t).unwrap();
        let want = e.beta_closed(&h).unwrap();
        let got = chart.beta(&t);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{t:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn every_entry_has_closed_forms_and_a_note() {
    for e in all_entries().unwrap() {
        assert!(e.closed.beta.is_some() && e.closed.theta.is_some());
        assert!(e.closed.theta_inverse.is_some() && e.closed.weight.is_some());
        assert!(!e.note.is_empty());
        assert_eq!(e.problem.name, e.id);
    }
}
