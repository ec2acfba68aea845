//! Analyze, build and verify on the catalog entries.

use std::sync::Arc;

use lieframe::catalog::get_entry;
use lieframe::frame::{periodization, Verdict};
use lieframe::lie::LieSplitSpec;
use lieframe::pipeline::{CoverRecipe, Defaults, Problem, VerifyOptions, WindowRecipe};
use lieframe::sampling::{compute_frequency_box, CoordBox, CoverGammaH, SAFETY_FACTOR};
use lieframe::windows::tabulated_window;
use lieframe::FrameError;

fn verify(id: &str, tests: usize) -> lieframe::frame::FrameReport {
    let built = get_entry(id).unwrap().problem.build(None).unwrap();
    built.verify(&VerifyOptions { tests, ..VerifyOptions::default() }).unwrap()
}

#[test]
fn axb_spline_window_is_parseval() {
    let r = verify("axb", 5);
    assert_eq!(r.verdict, Verdict::Parseval);
    assert!(r.within_thresholds, "{:?}", r.tests);
    for t in &r.tests {
        assert!((t.ratio - 1.0).abs() < 2e-3 && t.tail < 1e-4);
    }
}

#[test]
fn indicator_entries_are_orthonormal_bases() {
    for id in ["heisenberg", "free_nilpotent_step2", "onb_step3"] {
        let r = verify(id, 3);
        assert_eq!(r.verdict, Verdict::Onb, "{id}");
        assert!(r.onb.as_ref().unwrap().gram_residual < 1e-6, "{id}");
        assert!(r.within_thresholds, "{id}: {:?}", r.tests);
    }
}

#[test]
fn solv_window_gives_a_proper_frame() {
    let r = verify("solv_oscillator", 5);
    assert_eq!(r.verdict, Verdict::Frame);
    assert!(r.m_hat > 0.0 && r.lower_bound < r.upper_bound);
    let sqrt2 = std::f64::consts::SQRT_2;
    assert!((r.lower_bound - r.m_hat * sqrt2).abs() < 1e-12);
    assert!((r.upper_bound - r.big_m_hat * sqrt2).abs() < 1e-12);
    assert!(r.necessity_passed && r.within_thresholds);
}

#[test]
fn shearlet_spline_window_is_parseval() {
    let r = verify("toeplitz_shearlet", 1);
    assert_eq!(r.verdict, Verdict::Parseval);
    assert!(r.within_thresholds, "{:?}", r.tests);
}

#[test]
fn sparse_cover_is_not_a_frame() {
    let mut p = get_entry("axb").unwrap().problem;
    p.defaults.cover = CoverRecipe::Lattice { step: vec![3.0] };
    let r = p.build(None).unwrap().verify(&VerifyOptions { tests: 1, ..VerifyOptions::default() }).unwrap();
    assert_eq!(r.m_hat, 0.0);
    assert_eq!(r.verdict, Verdict::NotAFrame);
    assert!(!r.within_thresholds);
}

#[test]
fn abelian_algebra_fails_immersion() {
    let p = Problem {
        name: "abelian".into(),
        spec: Arc::new(LieSplitSpec::new("abelian", 2, 1)),
        lambda: vec![1.0, 0.0],
        index_set: None,
        domain: None,
        haar: lieframe::lie::HaarSource::MaurerCartan,
        defaults: get_entry("axb").unwrap().problem.defaults,
    };
    let rep = p.analyze().unwrap();
    assert!(!rep.immersion.passes);
    assert_eq!(rep.immersion.det_dtd, 0.0);
    assert!(matches!(p.build(None), Err(FrameError::NotImmersion { .. })));
}

#[test]
fn invalid_spec_is_refused() {
    let mut spec = LieSplitSpec::new("broken", 1, 1);
    spec.set_raw(1, 0, 0, 1.0);
    let p = Problem { spec: Arc::new(spec), ..get_entry("axb").unwrap().problem };
    assert!(matches!(p.analyze(), Err(FrameError::InvalidSpec(_))));
}

#[test]
fn analyze_reports_index_set_and_weight_samples() {
    let rep = get_entry("solv_oscillator").unwrap().problem.analyze().unwrap();
    assert!(rep.immersion.passes);
    assert_eq!(rep.index_set, vec![0]);
    for s in &rep.weight_samples {
        assert!((s.weight - 1.0 / (1.0 - s.xi[0] * s.xi[0]).sqrt()).abs() < 1e-10);
    }
    let axb = get_entry("axb").unwrap().problem.analyze().unwrap();
    assert_eq!(axb.jacobian, vec![vec![-1.0]]);
}

#[test]
fn computed_boxes_contain_the_image() {
    for id in ["axb", "toeplitz_shearlet"] {
        let chart = get_entry(id).unwrap().problem.chart().unwrap();
        let fbox = compute_frequency_box(&chart, SAFETY_FACTOR);
        assert!(fbox.containment_excess(&chart, 41) <= 0.0, "{id}");
    }
}

#[test]
fn missing_window_file_is_an_io_error() {
    let p = get_entry("axb").unwrap().problem;
    let recipe = WindowRecipe::Tabulated { path: "/no/such/window.csv".into() };
    assert!(matches!(p.build(Some(recipe)), Err(FrameError::Io { .. })));
}

#[test]
fn written_window_table_reloads() {
    let built = get_entry("axb").unwrap().problem.build(None).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("window.csv");
    built.window.write_csv(&path, 801).unwrap();
    let table = tabulated_window(&path).unwrap();
    for i in 0..50 {
        let t = -0.9 + 1.8 * i as f64 / 49.0;
        let (a, b) = (table.eval(&[t]), built.window.eval(&[t]));
        assert!((a - b).abs() < 1e-4 * (1.0 + b.abs()), "t = {t}: {a} vs {b}");
    }
}

#[test]
fn sl2_greedy_cover_periodizes_positively_near_the_base_point() {
    let built = get_entry("sl2_embed").unwrap().problem.build(None).unwrap();
    let CoverGammaH::Points { points, separation, .. } = &built.cover else { panic!("expected a point cover") };
    assert!(points.len() > 100);
    assert_eq!(*separation, 0.3);
    for h in CoordBox::symmetric(3, 0.2).grid(2) {
        assert!(periodization(&built.chart, &built.cover, &built.window, &h).unwrap() > 0.0);
    }
}

#[test]
fn default_recipes_serialize() {
    let d: Defaults = get_entry("onb_step3").unwrap().problem.defaults;
    let text = serde_json::to_string(&d).unwrap();
    let back: Defaults = serde_json::from_str(&text).unwrap();
    assert_eq!(d, back);
}
