use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::analysis::{estimate_frame_bounds, necessity_check, tonelli_rhs, verify_onb, FrameBounds, OnbReport, OracleCheck};
use super::coefficients::{frame_sum, norm_squared, SumOptions, SUM_QUAD_RTOL};
use crate::coadjoint::ThetaChart;
use crate::error::Result;
use crate::sampling::{CoordBox, CoverGammaH, FrequencyBox};
use crate::windows::{test_function, BumpPlacement, Window};

const TIGHT_UNIT_TOL: f64 = 1e-8;
const ZERO_BOUND: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NotAFrame,
    Frame,
    Parseval,
    Onb,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Relative slack on A ≤ ratio ≤ B.
    pub bound_slack: f64,
    /// |ratio - 1| for Parseval constructions.
    pub parseval_tol: f64,
    pub oracle_tol: f64,
    pub gram_tol: f64,
    pub tail_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { bound_slack: 2e-3, parseval_tol: 2e-3, oracle_tol: 1e-3, gram_tol: 1e-6, tail_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestRow {
    pub index: usize,
    pub bumps: usize,
    pub norm_sq: f64,
    pub frame_sum: f64,
    pub ratio: f64,
    pub radius: i64,
    pub tail: f64,
    pub translates: usize,
    pub quad_order: usize,
    pub quad_rel_change: f64,
    pub oracle: OracleCheck,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameReport {
    pub entry: String,
    pub window: String,
    pub seed: u64,
    pub volume: f64,
    pub half_width: f64,
    pub spacing: f64,
    pub m_hat: f64,
    pub big_m_hat: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub tight: bool,
    pub regional: bool,
    pub onb_candidate: bool,
    pub window_norm_sq: f64,
    pub verdict: Verdict,
    pub necessity_passed: bool,
    pub onb: Option<OnbReport>,
    pub tests: Vec<TestRow>,
    pub thresholds: Thresholds,
    pub within_thresholds: bool,
    pub warnings: Vec<String>,
}

impl FrameReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "index,bumps,norm_sq,frame_sum,ratio,radius,tail,translates,quad_order,quad_rel_change,oracle_integral,oracle_residual,passed\n",
        );
        for t in &self.tests {
            let _ = writeln!(
                out,
                "{},{},{:.15e},{:.15e},{:.15e},{},{:.6e},{},{},{:.6e},{:.15e},{:.6e},{}",
                t.index,
                t.bumps,
                t.norm_sq,
                t.frame_sum,
                t.ratio,
                t.radius,
                t.tail,
                t.translates,
                t.quad_order,
                t.quad_rel_change,
                t.oracle.integral,
                t.oracle.residual,
                t.passed
            );
        }
        out
    }
}

/// Everything [`verify_frame`] needs besides the chart.
#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub entry: String,
    pub window_label: String,
    pub region: CoordBox,
    pub placement: BumpPlacement,
    pub seed: u64,
    pub tests: usize,
    pub sum: SumOptions,
    pub thresholds: Thresholds,
    pub bounds_grid: usize,
    /// Run the Gram patch check even if the bounds do not single out an ONB.
    pub claim_onb: bool,
    pub onb_kappa_count: usize,
}

/// Bounds, seeded frame sums with the Tonelli oracle, and the Gram patch when an ONB is plausible.
pub fn verify_frame(
    chart: &ThetaChart,
    f: &Window,
    cover: &CoverGammaH,
    fbox: &FrequencyBox,
    cfg: &VerifyConfig,
) -> Result<FrameReport> {
    let th = cfg.thresholds;
    let mut warnings = Vec::new();
    let bounds: FrameBounds = estimate_frame_bounds(chart, cover, f, fbox, Some(&cfg.region), cfg.bounds_grid)?;
    if bounds.regional {
        warnings.push("bounds evaluated over a bounded region of H only".to_string());
    }
    let norm_f = norm_squared(chart, f, 2 * cfg.sum.quad_order)?;
    let not_frame = bounds.m_hat <= ZERO_BOUND;
    let parseval = !not_frame
        && bounds.tight
        && (bounds.lower - 1.0).abs() <= TIGHT_UNIT_TOL
        && (bounds.upper - 1.0).abs() <= TIGHT_UNIT_TOL;
    let onb_candidate = parseval && (norm_f - 1.0).abs() <= TIGHT_UNIT_TOL;
    let onb = if (onb_candidate || cfg.claim_onb) && !not_frame {
        match verify_onb(chart, cover, f, fbox, 1, cfg.onb_kappa_count, cfg.sum.quad_order) {
            Ok(rep) => Some(rep),
            Err(e) => {
                warnings.push(format!("ONB patch check skipped: {e}"));
                None
            }
        }
    } else {
        None
    };
    let verdict = if not_frame {
        Verdict::NotAFrame
    } else if onb_candidate && onb.as_ref().is_some_and(|o| o.gram_residual < th.gram_tol) {
        Verdict::Onb
    } else if parseval {
        Verdict::Parseval
    } else {
        Verdict::Frame
    };
    let necessity_passed =
        necessity_check(bounds.lower, bounds.upper, bounds.m_hat, bounds.big_m_hat, bounds.volume);

    let mut tests = Vec::with_capacity(cfg.tests);
    let sum_opts = SumOptions { tail_tol: th.tail_tol, ..cfg.sum };
    for index in 0..cfg.tests {
        let (g, bumps) = test_function(cfg.seed, index, &cfg.region, &cfg.placement);
        let norm_sq = norm_squared(chart, &g, 2 * cfg.sum.quad_order)?;
        let s = frame_sum(chart, &g, f, cover, fbox, &sum_opts)?;
        let rhs = tonelli_rhs(chart, cover, f, &g, fbox, 2 * cfg.sum.quad_order)?;
        let oracle = OracleCheck::new(s.sum, rhs);
        let ratio = s.sum / norm_sq;
        if s.diverging {
            warnings.push(format!("test {index}: frequency sum did not settle by radius {}", s.radius));
        }
        if s.quad_rel_change >= SUM_QUAD_RTOL {
            warnings.push(format!("test {index}: quadrature relative change {:.2e}", s.quad_rel_change));
        }
        let in_bounds = !not_frame
            && ratio >= bounds.lower * (1.0 - th.bound_slack)
            && ratio <= bounds.upper * (1.0 + th.bound_slack);
        let parseval_ok = !parseval || (ratio - 1.0).abs() < th.parseval_tol;
        let passed = in_bounds && parseval_ok && oracle.residual < th.oracle_tol && !s.diverging;
        tests.push(TestRow {
            index,
            bumps: bumps.len(),
            norm_sq,
            frame_sum: s.sum,
            ratio,
            radius: s.radius,
            tail: s.last_increment,
            translates: s.translates,
            quad_order: s.quad_order,
            quad_rel_change: s.quad_rel_change,
            oracle,
            passed,
        });
    }
    let gram_ok = onb.as_ref().map_or(true, |o| o.gram_residual < th.gram_tol);
    let within_thresholds = !not_frame && necessity_passed && gram_ok && tests.iter().all(|t| t.passed);
    Ok(FrameReport {
        entry: cfg.entry.clone(),
        window: cfg.window_label.clone(),
        seed: cfg.seed,
        volume: fbox.volume(),
        half_width: fbox.half_width,
        spacing: fbox.spacing(),
        m_hat: bounds.m_hat,
        big_m_hat: bounds.big_m_hat,
        lower_bound: bounds.lower,
        upper_bound: bounds.upper,
        tight: bounds.tight,
        regional: bounds.regional,
        onb_candidate,
        window_norm_sq: norm_f,
        verdict,
        necessity_passed,
        onb,
        tests,
        thresholds: th,
        within_thresholds,
        warnings,
    })
}
