//! Values frozen from tools/oracle.py, which rebuilds every group from its own matrix
//! realization in extended precision and shares no code with the crate.

use lieframe::catalog::get_entry;
use lieframe::coadjoint::{coadjoint_jacobian, ChartOptions, ThetaChart};
use lieframe::frame::frame_coefficient;
use lieframe::lie::HaarSource;
use lieframe::sampling::{BoxKind, FrequencyBox};
use lieframe::windows::{bumps_window, Bump};

struct Point {
    t: &'static [f64],
    theta: &'static [f64],
    rho_mc: f64,
    weight: f64,
}

struct Frozen {
    id: &'static str,
    d: &'static [&'static [f64]],
    points: &'static [Point],
}

const FROZEN: &[Frozen] = &[
    Frozen {
        id: "axb",
        d: &[&[-1.0]],
        points: &[
            Point { t: &[0.3], theta: &[0.7408182206817179], rho_mc: 1.0, weight: 1.3498588075760032 },
            Point { t: &[-0.7], theta: &[2.0137527074704766], rho_mc: 1.0, weight: 0.4965853037914095 },
        ],
    },
    Frozen {
        id: "heisenberg",
        d: &[&[0.0], &[-1.0]],
        points: &[Point { t: &[0.2], theta: &[-0.2], rho_mc: 1.0, weight: 1.0 }],
    },
    Frozen {
        id: "solv_oscillator",
        d: &[&[-1.0], &[0.0], &[0.0]],
        points: &[
            Point { t: &[0.5], theta: &[-0.479425538604203], rho_mc: 1.0, weight: 1.139493927324549 },
            Point { t: &[-0.25], theta: &[0.24740395925452294], rho_mc: 1.0, weight: 1.0320850239843857 },
        ],
    },
    Frozen {
        id: "toeplitz_shearlet",
        d: &[&[0.0, -1.0], &[-1.0, 0.0]],
        points: &[
            Point {
                t: &[0.4, -0.3],
                theta: &[1.3498588075760032, -0.5399435230304013],
                rho_mc: 1.0,
                weight: 0.5488116360940264,
            },
            Point {
                t: &[-0.6, 0.5],
                theta: &[0.6065306597126334, 0.36391839582758007],
                rho_mc: 1.0,
                weight: 2.718281828459045,
            },
        ],
    },
    Frozen {
        id: "free_nilpotent_step2",
        d: &[&[-2.0], &[0.0], &[0.0], &[0.0]],
        points: &[Point { t: &[0.6], theta: &[-1.2], rho_mc: 1.0, weight: 0.5 }],
    },
    Frozen {
        id: "onb_step3",
        d: &[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]],
        points: &[
            Point { t: &[0.3, -0.2], theta: &[0.3, -0.15500000000000003], rho_mc: 1.0, weight: 1.0 },
            Point { t: &[-0.45, 0.1], theta: &[-0.45, 0.20125], rho_mc: 1.0, weight: 1.0 },
        ],
    },
    Frozen {
        id: "sl2_embed",
        d: &[&[0.0, -1.0, 0.0], &[-1.0, 0.0, 0.0], &[1.0, 0.0, -1.0], &[0.0, 1.0, 0.0]],
        points: &[
            Point {
                t: &[0.1, -0.2, 0.15],
                theta: &[-0.08173668839360555, -0.0002592659840816816, 0.8146405095538067],
                rho_mc: 0.6703200460356393,
                weight: 2.731930099709179,
            },
            Point {
                t: &[-0.3, 0.25, -0.1],
                theta: &[0.379455456497974, -0.10748373500862361, 1.2266763335265103],
                rho_mc: 1.6487212707001282,
                weight: 0.29989935496174785,
            },
        ],
    },
];

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * (1.0 + b.abs())
}

#[test]
fn jacobian_at_identity_matches_oracle() {
    for fz in FROZEN {
        let p = get_entry(fz.id).unwrap().problem;
        let d = coadjoint_jacobian(&p.spec, &p.lambda);
        assert_eq!(d.nrows(), fz.d.len(), "{}", fz.id);
        for (j, row) in fz.d.iter().enumerate() {
            for (k, want) in row.iter().enumerate() {
                assert!(close(d[(j, k)], *want, 1e-12), "{} D[{j},{k}] = {} vs {want}", fz.id, d[(j, k)]);
            }
        }
    }
}

#[test]
fn theta_and_weight_match_oracle() {
    for fz in FROZEN {
        let chart = get_entry(fz.id).unwrap().problem.chart().unwrap();
        for pt in fz.points {
            let th = chart.theta(pt.t);
            for (a, b) in th.iter().zip(pt.theta) {
                assert!(close(*a, *b, 1e-12), "{} Θ({:?}) = {th:?}", fz.id, pt.t);
            }
            let w = chart.weight_at(pt.t).unwrap();
            assert!(close(w, pt.weight, 1e-10), "{} w({:?}) = {w} vs {}", fz.id, pt.t, pt.weight);
        }
    }
}

#[test]
fn maurer_cartan_density_matches_oracle() {
    for fz in FROZEN {
        let p = get_entry(fz.id).unwrap().problem;
        let opts = ChartOptions { haar: HaarSource::MaurerCartan, ..p.chart_options() };
        let chart = ThetaChart::build(p.spec.clone(), p.lambda.clone(), opts).unwrap();
        for pt in fz.points {
            let rho = chart.haar_density(pt.t).unwrap();
            assert!(close(rho, pt.rho_mc, 1e-10), "{} ρ({:?}) = {rho} vs {}", fz.id, pt.t, pt.rho_mc);
        }
    }
}

#[test]
fn sl2_declared_density_differs_from_left_haar() {
    // The declared a^-3 da reads e^{-2u} in (θ, u, s); left Haar measure of KAN is e^{2u}.
    let chart = get_entry("sl2_embed").unwrap().problem.chart().unwrap();
    let t = [0.1, -0.2, 0.15];
    let declared = chart.haar_density(&t).unwrap();
    assert!(close(declared, (0.4f64).exp(), 1e-14));
    assert!((declared - 0.6703200460356393).abs() > 0.8);
}

#[test]
fn axb_coefficients_match_substituted_integral() {
    // ∫ g(h - ℓ) f(h) e^{-2πiκδ e^{-h}} dh evaluated in ξ = e^{-h} with adaptive quadrature.
    const CASES: &[(f64, i64, f64, f64)] = &[
        (0.0, 0, 0.10224722470238436, 0.0),
        (0.0, 1, -0.03627318815864506, -0.09380948770091571),
        (0.15, -2, -0.05368494334240559, -0.022358149317713825),
        (-0.2, 3, 0.06218344953574464, -0.018550534674861195),
    ];
    let chart = get_entry("axb").unwrap().problem.chart().unwrap();
    let g = bumps_window(&[Bump { center: vec![0.1], width: vec![0.2], coefficient: 1.0 }]);
    let f = bumps_window(&[Bump { center: vec![0.05], width: vec![0.25], coefficient: 1.0 }]);
    let fbox = FrequencyBox::prescribed(1.5, vec![0.0], BoxKind::Containing);
    for &(ell, kappa, re, im) in CASES {
        let c = frame_coefficient(&chart, &g, &f, &[ell], &[kappa], &fbox, 32).unwrap();
        assert!((c.value.0 - re).abs() < 1e-10, "ℓ={ell} κ={kappa}: {:?}", c.value);
        assert!((c.value.1 - im).abs() < 1e-10, "ℓ={ell} κ={kappa}: {:?}", c.value);
        assert!(!c.flagged);
    }
}
