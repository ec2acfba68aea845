//! Θ, Θ⁻¹ and W against the catalog closed forms, and the independent weight and Haar routes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lieframe::catalog::{all_entries, get_entry, CatalogEntry};
use lieframe::coadjoint::{ChartOptions, ThetaChart, WeightMethod};
use lieframe::lie::HaarSource;
use lieframe::sampling::CoordBox;

fn samples(b: &CoordBox, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..b.dim()).map(|k| rng.gen_range(b.lo[k]..b.hi[k])).collect()).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn chart_of(e: &CatalogEntry) -> ThetaChart {
    e.problem.chart().unwrap()
}

#[test]
fn numeric_theta_and_beta_match_closed_forms() {
    for e in all_entries().unwrap() {
        let chart = chart_of(&e);
        let (theta, beta) = (e.closed.theta.clone().unwrap(), e.closed.beta.clone().unwrap());
        for t in samples(&chart.domain().shrink(0.02), 100, 7) {
            for (a, b) in chart.theta(&t).iter().zip(theta(&t)) {
                assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{} Θ at {t:?}", e.id);
            }
            for (a, b) in chart.beta(&t).iter().zip(beta(&t)) {
                assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "{} β at {t:?}", e.id);
            }
        }
    }
}

#[test]
fn numeric_inverse_matches_closed_inverse() {
    for e in all_entries().unwrap() {
        let chart = chart_of(&e);
        let (theta, inv) = (e.closed.theta.clone().unwrap(), e.closed.theta_inverse.clone().unwrap());
        for t in samples(&chart.domain().shrink(0.02), 100, 11) {
            let xi = theta(&t);
            let got = chart.invert(&xi).unwrap();
            let want = inv(&xi);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-10, "{} Θ⁻¹({xi:?}) = {got:?} vs {want:?}", e.id);
            }
            let back = chart.theta(&got);
            let err = back.iter().zip(&xi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err <= 1e-10, "{} round trip {err:e}", e.id);
        }
    }
}

#[test]
fn pushforward_weight_matches_closed_weight() {
    for e in all_entries().unwrap() {
        let chart = chart_of(&e);
        let (theta, weight) = (e.closed.theta.clone().unwrap(), e.closed.weight.clone().unwrap());
        let tol = if e.id == "sl2_embed" { 1e-6 } else { 1e-8 };
        for t in samples(&chart.domain().shrink(0.02), 100, 13) {
            let xi = theta(&t);
            let w = chart.weight(&xi, WeightMethod::Pushforward).unwrap();
            assert!(rel(w, weight(&xi)) < tol, "{} W({xi:?}) = {w} vs {}", e.id, weight(&xi));
        }
    }
}

#[test]
fn solv_weight_on_the_reference_interval() {
    let chart = chart_of(&get_entry("solv_oscillator").unwrap());
    for i in 0..100 {
        let xi = -0.7 + 1.4 * (i as f64 + 0.5) / 100.0;
        let w = chart.weight(&[xi], WeightMethod::Pushforward).unwrap();
        assert!(rel(w, 1.0 / (1.0 - xi * xi).sqrt()) < 1e-8);
        let t = chart.invert(&[xi]).unwrap();
        assert!((t[0] + xi.asin()).abs() < 1e-10);
    }
}

#[test]
fn eigen_route_agrees_with_pushforward() {
    for id in ["axb", "heisenberg", "solv_oscillator", "toeplitz_shearlet", "onb_step3", "free_nilpotent_step2"] {
        let e = get_entry(id).unwrap();
        let chart = chart_of(&e);
        for t in samples(&chart.domain().shrink(0.1), 20, 17) {
            let xi = chart.theta(&t);
            let a = chart.weight(&xi, WeightMethod::Pushforward).unwrap();
            let b = chart.weight(&xi, WeightMethod::Eigen).unwrap();
            assert!(rel(a, b) < 1e-8, "{id} at {xi:?}: {a} vs {b}");
        }
    }
}

#[test]
fn finite_difference_haar_matches_maurer_cartan() {
    for e in all_entries().unwrap() {
        let p = &e.problem;
        let build = |haar| {
            let opts = ChartOptions { haar, ..p.chart_options() };
            ThetaChart::build(p.spec.clone(), p.lambda.clone(), opts).unwrap()
        };
        let mc = build(HaarSource::MaurerCartan);
        let fd = build(HaarSource::FiniteDifference);
        for t in samples(&mc.domain().shrink(0.05), 20, 19) {
            let a = mc.haar_density(&t).unwrap();
            let b = fd.haar_density(&t).unwrap();
            assert!(rel(b, a) < 1e-6, "{} ρ at {t:?}: {a} vs {b}", e.id);
        }
    }
}

#[test]
fn sl2_maurer_cartan_is_left_invariant_and_declared_is_not() {
    // ρ is left Haar iff ρ(zh)|det ∂(zh)/∂h| = ρ(h).
    let p = get_entry("sl2_embed").unwrap().problem;
    let declared = p.chart().unwrap();
    let opts = ChartOptions { haar: HaarSource::MaurerCartan, ..p.chart_options() };
    let mc = ThetaChart::build(p.spec.clone(), p.lambda.clone(), opts).unwrap();
    let g = mc.group();
    let z = [0.2, 0.3, -0.4];
    let h = [0.1, -0.15, 0.2];
    let step = 1e-6;
    let mut jac = nalgebra::DMatrix::<f64>::zeros(3, 3);
    for k in 0..3 {
        let (mut hp, mut hm) = (h, h);
        hp[k] += step;
        hm[k] -= step;
        let (a, b) = (g.product(&z, &hp).unwrap(), g.product(&z, &hm).unwrap());
        for i in 0..3 {
            jac[(i, k)] = (a[i] - b[i]) / (2.0 * step);
        }
    }
    let zh = g.product(&z, &h).unwrap();
    let det = jac.determinant().abs();
    let lhs_mc = mc.haar_density(&zh).unwrap() * det;
    assert!(rel(lhs_mc, mc.haar_density(&h).unwrap()) < 1e-7);
    let lhs_declared = declared.haar_density(&zh).unwrap() * det;
    assert!(rel(lhs_declared, declared.haar_density(&h).unwrap()) > 1e-2);
}

#[test]
fn catalog_weight_examples() {
    let solv = get_entry("solv_oscillator").unwrap();
    let w = solv.closed.weight.unwrap();
    assert!(rel(w(&[0.3]), 1.0 / (1.0 - 0.09f64).sqrt()) < 1e-15);
    let onb = get_entry("onb_step3").unwrap();
    let chart = chart_of(&onb);
    for t in samples(chart.domain(), 50, 23) {
        assert!((chart.weight_at(&t).unwrap() - 1.0).abs() < 1e-10);
    }
    let sh = get_entry("toeplitz_shearlet").unwrap();
    let th = sh.closed.theta.unwrap();
    let (t1, t2) = (0.35, -0.6);
    let v = th(&[t1, t2]);
    assert!(rel(v[0], (-t2).exp()) < 1e-15 && rel(v[1], -(-t2).exp() * t1) < 1e-15);
}

#[test]
fn solv_reference_domain_is_admissible() {
    let chart = chart_of(&get_entry("solv_oscillator").unwrap());
    let o = CoordBox::new(vec![-std::f64::consts::FRAC_PI_4], vec![std::f64::consts::FRAC_PI_4]).unwrap();
    assert!(chart.check_domain(&o).is_ok());
    let folded = CoordBox::symmetric(1, 3.0);
    assert!(chart.check_domain(&folded).is_err());
}
