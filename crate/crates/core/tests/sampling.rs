//! Frequency boxes, lattice shells and covers.

use lieframe::lie::GroupModel;
use lieframe::sampling::{
    build_greedy_cover, lattice_shell, lattice_spiral, BoxKind, CoordBox, CoverGammaH, FrequencyBox,
};

#[test]
fn lattice_elements_in_box() {
    let c = CoverGammaH::lattice(vec![0.5]);
    let b = CoordBox::new(vec![-1.0], vec![0.75]).unwrap();
    assert_eq!(c.elements_in(&b), vec![vec![-1.0], vec![-0.5], vec![0.0], vec![0.5]]);
}

#[test]
fn greedy_cover_is_separated_and_dense() {
    let g = GroupModel::Abelian { dim: 2 };
    let c = build_greedy_cover(&g, 1.0, 0.3).unwrap();
    let CoverGammaH::Points { points, .. } = &c else { panic!() };
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = p.iter().zip(q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(d >= 0.3 - 1e-12);
        }
    }
    for h in CoordBox::symmetric(2, 1.0).grid(21) {
        let d = points
            .iter()
            .map(|q| q.iter().zip(&h).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min);
        assert!(d <= 0.6);
    }
}

#[test]
fn shells_have_expected_sizes() {
    assert_eq!(lattice_shell(2, 0).len(), 1);
    assert_eq!(lattice_shell(2, 1).len(), 8);
    assert_eq!(lattice_shell(2, 2).len(), 16);
    assert_eq!(lattice_shell(1, 3), vec![vec![-3], vec![3]]);
    assert_eq!(lattice_spiral(2, 25).len(), 25);
}

#[test]
fn box_volume_and_spacing() {
    let b = FrequencyBox::prescribed(std::f64::consts::SQRT_2 / 2.0, vec![0.0], BoxKind::Containing);
    assert!((b.volume() - std::f64::consts::SQRT_2).abs() < 1e-15);
    assert!((b.spacing() - 1.0 / std::f64::consts::SQRT_2).abs() < 1e-15);
}
