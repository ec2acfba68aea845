//! Structural invariants checked on random inputs.

use std::sync::OnceLock;

use proptest::prelude::*;

use lieframe::catalog::get_entry;
use lieframe::coadjoint::{ChartOptions, ThetaChart};
use lieframe::frame::{frame_coefficient, norm_squared, periodization, rep_apply_h, rep_apply_n};
use lieframe::lie::{GroupModel, HaarSource, LieSplitSpec};
use lieframe::quadrature::TensorRule;
use lieframe::sampling::{BoxKind, CoordBox, FrequencyBox};
use lieframe::windows::{bumps_window, test_function, Bump, BumpPlacement, PartitionWindow};

const IDS: [&str; 7] = [
    "axb",
    "heisenberg",
    "solv_oscillator",
    "toeplitz_shearlet",
    "sl2_embed",
    "onb_step3",
    "free_nilpotent_step2",
];

fn spec_of(id: &str) -> std::sync::Arc<LieSplitSpec> {
    get_entry(id).unwrap().problem.spec
}

fn heisenberg_h() -> GroupModel {
    let mut s = LieSplitSpec::new("heis-h", 1, 3);
    s.set_bracket(3, 2, 1, 1.0);
    GroupModel::from_spec(&s).unwrap()
}

/// Building the SL(2) chart searches for a neighbourhood, so it is built once.
fn sl2_mc() -> &'static ThetaChart {
    static CHART: OnceLock<ThetaChart> = OnceLock::new();
    CHART.get_or_init(|| {
        let p = get_entry("sl2_embed").unwrap().problem;
        let opts = ChartOptions { haar: HaarSource::MaurerCartan, ..p.chart_options() };
        ThetaChart::build(p.spec.clone(), p.lambda.clone(), opts).unwrap()
    })
}

fn vec3(r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(
        id in prop::sample::select(IDS.to_vec()),
        seed in prop::collection::vec(-2.0f64..2.0, 27),
    ) {
        let s = spec_of(id);
        let d = s.dim();
        let (x, rest) = seed.split_at(d.min(9));
        let (y, z) = rest.split_at(d.min(9));
        let pad = |v: &[f64]| { let mut v = v.to_vec(); v.resize(d, 0.5); v };
        let (x, y, z) = (pad(x), pad(y), pad(&z[..d.min(9)]));
        let xy = s.bracket(&x, &y);
        let yx = s.bracket(&y, &x);
        for k in 0..d {
            prop_assert!((xy[k] + yx[k]).abs() < 1e-12);
        }
        let j1 = s.bracket(&x, &s.bracket(&y, &z));
        let j2 = s.bracket(&y, &s.bracket(&z, &x));
        let j3 = s.bracket(&z, &s.bracket(&x, &y));
        for k in 0..d {
            prop_assert!((j1[k] + j2[k] + j3[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn bch_law_inverse_and_associativity(a in vec3(1.5), b in vec3(1.5), c in vec3(1.5)) {
        let g = heisenberg_h();
        let e = g.product(&g.inverse(&a).unwrap(), &a).unwrap();
        prop_assert!(e.iter().all(|x| x.abs() < 1e-12));
        let l = g.product(&g.product(&a, &b).unwrap(), &c).unwrap();
        let r = g.product(&a, &g.product(&b, &c).unwrap()).unwrap();
        for k in 0..3 {
            prop_assert!((l[k] - r[k]).abs() < 1e-11);
        }
    }

    #[test]
    fn matrix_law_round_trips(a in vec3(0.6), b in vec3(0.6)) {
        let chart = sl2_mc();
        let g = chart.group();
        let back = g.from_matrix(&g.to_matrix(&a).unwrap()).unwrap();
        for k in 0..3 {
            prop_assert!((back[k] - a[k]).abs() < 1e-9);
        }
        let p = g.product(&a, &b).unwrap();
        let want = g.to_matrix(&a).unwrap() * g.to_matrix(&b).unwrap();
        prop_assert!((g.to_matrix(&p).unwrap() - want).amax() < 1e-10);
        let e = g.product(&g.inverse(&a).unwrap(), &a).unwrap();
        prop_assert!(e.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn squared_partition_translates_sum_to_one(
        n in 1usize..=4,
        eps in prop::sample::select(vec![0.5, 1.0, 2.0]),
        t in -10.0f64..10.0,
    ) {
        let s = PartitionWindow::new(n, eps).unwrap();
        let kmax = (s.half_support() / s.step()).ceil() as i64 + 2;
        let k0 = (t / s.step()).round() as i64;
        let total: f64 = (-k0 - kmax..=-k0 + kmax).map(|k| s.value(t + k as f64 * s.step()).powi(2)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn maurer_cartan_density_is_left_invariant(z in vec3(0.4), h in vec3(0.4)) {
        let chart = sl2_mc();
        let g = chart.group();
        let step = 1e-6;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(3, 3);
        for k in 0..3 {
            let (mut hp, mut hm) = (h.clone(), h.clone());
            hp[k] += step;
            hm[k] -= step;
            let (a, b) = (g.product(&z, &hp).unwrap(), g.product(&z, &hm).unwrap());
            for i in 0..3 {
                jac[(i, k)] = (a[i] - b[i]) / (2.0 * step);
            }
        }
        let zh = g.product(&z, &h).unwrap();
        let lhs = chart.haar_density(&zh).unwrap() * jac.determinant().abs();
        let rhs = chart.haar_density(&h).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-6 * rhs);
    }

    #[test]
    fn weight_is_positive_on_the_chart_domain(
        id in prop::sample::select(IDS.to_vec()),
        u in prop::collection::vec(0.0f64..1.0, 3),
    ) {
        let chart = get_entry(id).unwrap().problem.chart().unwrap();
        let b = chart.domain();
        let t: Vec<f64> = (0..b.dim()).map(|k| b.lo[k] + u[k] * b.width(k)).collect();
        let w = chart.weight_at(&t).unwrap();
        prop_assert!(w.is_finite() && w > 0.0);
        let back = chart.invert(&chart.theta(&t)).unwrap();
        for k in 0..t.len() {
            prop_assert!((back[k] - t[k]).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn representation_is_unitary(z in -2.0f64..2.0, x in -3.0f64..3.0, c in -0.5f64..0.5, w in 0.1f64..0.3) {
        // axb: H = R with ρ = 1, so π(z) is a translation and π(exp X) a pure phase.
        let chart = get_entry("axb").unwrap().problem.chart().unwrap();
        let g = bumps_window(&[Bump { center: vec![c], width: vec![w], coefficient: 1.0 }]);
        let norm = norm_squared(&chart, &g, 64).unwrap();
        let moved = g.support.translate(&[z]);
        let rule = TensorRule::over_box_with_breaks(&moved, 64, &[g.breaks[0].iter().map(|b| b + z).collect()]);
        let mut acc = 0.0;
        for i in 0..rule.len() {
            let h = rule.point(i);
            let v = rep_apply_h(chart.group(), &g, &[z], h).unwrap();
            let m = rep_apply_n(&chart, &g, &[x], h).norm();
            prop_assert!((m - g.eval(h).abs()).abs() < 1e-14);
            acc += v * v * rule.weights[i];
        }
        prop_assert!((acc - norm).abs() < 1e-10 * norm);
    }

    #[test]
    fn opposite_frequencies_give_conjugate_coefficients(
        ell in -1.0f64..1.0,
        kappa in -6i64..6,
        c in -0.3f64..0.3,
    ) {
        let chart = get_entry("solv_oscillator").unwrap().problem.chart().unwrap();
        let g = bumps_window(&[Bump { center: vec![c], width: vec![0.15], coefficient: 1.0 }]);
        let f = bumps_window(&[Bump { center: vec![0.0], width: vec![0.18], coefficient: 1.0 }]);
        let fbox = FrequencyBox::prescribed(0.75, vec![0.0], BoxKind::Containing);
        let a = frame_coefficient(&chart, &g, &f, &[ell], &[kappa], &fbox, 32).unwrap().complex();
        let b = frame_coefficient(&chart, &g, &f, &[ell], &[-kappa], &fbox, 32).unwrap().complex();
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn parseval_window_periodizes_to_inverse_volume(h in -5.0f64..5.0) {
        let built = get_entry("axb").unwrap().problem.build(None).unwrap();
        let v = periodization(&built.chart, &built.cover, &built.window, &[h]).unwrap();
        prop_assert!((v * built.fbox.volume() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn test_functions_are_reproducible(seed in any::<u64>(), index in 0usize..10) {
        let region = CoordBox::symmetric(2, 1.5);
        let (_, a) = test_function(seed, index, &region, &BumpPlacement::Region);
        let (_, b) = test_function(seed, index, &region, &BumpPlacement::Region);
        prop_assert!(!a.is_empty() && a.len() <= 5);
        prop_assert_eq!(a, b);
    }
}
