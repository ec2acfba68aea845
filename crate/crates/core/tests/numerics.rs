//! Matrix exponentials, Gauss-Legendre rules and B-splines.

use nalgebra::DMatrix;

use lieframe::linalg::{expm, expm_frechet, max_abs};
use lieframe::quadrature::{gauss_legendre, Rule1d, TensorRule};
use lieframe::sampling::CoordBox;
use lieframe::windows::bspline;

#[test]
fn expm_rotation() {
    let t = 2.7;
    let a = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
    let e = expm(&a);
    let want = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
    assert!(max_abs(&(e - want)) < 1e-13);
}

#[test]
fn expm_matches_nalgebra() {
    let a = DMatrix::from_row_slice(3, 3, &[0.3, -1.2, 0.5, 2.0, -0.1, 0.0, 0.4, 0.7, -1.5]);
    let ours = expm(&a);
    let theirs = a.clone().exp();
    assert!(max_abs(&(ours - theirs)) < 1e-12);
}

#[test]
fn frechet_matches_difference() {
    let a = DMatrix::from_row_slice(2, 2, &[0.2, 1.0, -0.5, 0.1]);
    let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.3, -0.2]);
    let h = 1e-6;
    let fd = (expm(&(&a + &e * h)) - expm(&(&a - &e * h))) / (2.0 * h);
    assert!(max_abs(&(expm_frechet(&a, &e) - fd)) < 1e-8);
}

#[test]
fn nodes_integrate_polynomials_exactly() {
    for n in 1..20 {
        let (x, w) = gauss_legendre(n);
        for deg in 0..(2 * n) {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
        }
    }
}

#[test]
fn composite_with_breaks_handles_kinks() {
    let r = Rule1d::composite_with_breaks(-1.0, 2.0, 32, &[0.3]);
    let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * (x - 0.3).abs()).sum();
    let want = 0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7;
    assert!((got - want).abs() < 1e-13);
}

#[test]
fn tensor_volume() {
    let b = CoordBox::new(vec![-1.0, 0.0], vec![1.0, 3.0]).unwrap();
    let t = TensorRule::over_box(&b, 16);
    let vol: f64 = t.weights.iter().sum();
    assert!((vol - 6.0).abs() < 1e-13);
    assert_eq!(t.len(), 256);
}

#[test]
fn hat_values() {
    assert!((bspline(1, 0.0) - 1.0).abs() < 1e-15);
    assert_eq!(bspline(1, 1.0), 0.0);
    assert_eq!(bspline(1, -1.0), 0.0);
    assert!((bspline(1, 0.25) - 0.75).abs() < 1e-15);
    assert!((bspline(0, 0.2) - 1.0).abs() < 1e-15);
}

#[test]
fn cubic_matches_closed_form() {
    // Centred cubic: 2/3 - x² + |x|³/2 on |x| ≤ 1, (2-|x|)³/6 on 1 ≤ |x| ≤ 2.
    for i in 0..200 {
        let x = -2.2 + 4.4 * i as f64 / 199.0;
        let a = x.abs();
        let want = if a <= 1.0 {
            2.0 / 3.0 - a * a + a * a * a / 2.0
        } else if a < 2.0 {
            (2.0 - a).powi(3) / 6.0
        } else {
            0.0
        };
        assert!((bspline(3, x) - want).abs() < 1e-14, "x={x}");
    }
}
