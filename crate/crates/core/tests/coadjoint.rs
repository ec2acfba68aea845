//! Jacobian at the identity, immersion test and index-set choice.

use nalgebra::DMatrix;

use lieframe::coadjoint::{immersion_check, select_index_set};

#[test]
fn lexicographic_tie_break() {
    let d = DMatrix::from_row_slice(3, 1, &[1.0, -1.0, 0.5]);
    assert_eq!(select_index_set(&d), vec![0]);
    let d = DMatrix::from_row_slice(3, 1, &[0.5, -2.0, 2.0]);
    assert_eq!(select_index_set(&d), vec![1]);
}

#[test]
fn zero_matrix_fails_immersion() {
    let d = DMatrix::<f64>::zeros(2, 1);
    let rep = immersion_check(&d);
    assert_eq!(rep.det_dtd, 0.0);
    assert!(!rep.passes);
}
