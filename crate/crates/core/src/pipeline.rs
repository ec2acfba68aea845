//! Recipes for windows, covers and frequency boxes, and the analyze / build / verify stages.

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coadjoint::{coadjoint_jacobian, immersion_check, ChartOptions, ImmersionReport, ThetaChart, WeightMethod};
use crate::error::{FrameError, Result};
use crate::frame::{verify_frame, FrameReport, SumOptions, Thresholds, VerifyConfig};
use crate::lie::{HaarSource, LieSplitSpec, ValidationReport};
use crate::sampling::{
    build_greedy_cover, build_tiling_cover, compute_frequency_box, BoxKind, CoordBox, CoverGammaH, FrequencyBox,
    SAFETY_FACTOR,
};
use crate::windows::{
    fitted_partition_window, indicator_window, parseval_window, tabulated_window, BumpPlacement, Window, WindowKind,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WindowRecipe {
    /// |C|^{-1/2} s_n w^{-1/2} with s_n a product partition window fitted to the chart domain.
    SplineParseval { degree: usize },
    /// |C|^{-1/2} w^{-1/2} on the chart domain.
    Indicator,
    /// s_n w^{-1}, no normalisation.
    PartitionOverWeight { degree: usize },
    /// Values read from a CSV table.
    Tabulated { path: PathBuf },
}

impl WindowRecipe {
    pub fn label(&self) -> String {
        match self {
            WindowRecipe::SplineParseval { degree } => format!("spline-parseval-{degree}"),
            WindowRecipe::Indicator => "indicator".into(),
            WindowRecipe::PartitionOverWeight { degree } => format!("partition-over-weight-{degree}"),
            WindowRecipe::Tabulated { path } => format!("tabulated:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoverRecipe {
    /// Lattice whose step is the partition step of the window, or the domain width otherwise.
    Matched,
    Lattice { step: Vec<f64> },
    Greedy { region_radius: f64, separation: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FrequencyRecipe {
    Computed,
    Prescribed { half_width: f64, center: Vec<f64>, fundamental_domain: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementRecipe {
    Region,
    /// Each test bump inside one lattice translate of the chart domain.
    WithinTiles,
}

/// Window, cover, box and verification region used when the caller does not override them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub window: WindowRecipe,
    pub cover: CoverRecipe,
    pub frequency: FrequencyRecipe,
    pub region: CoordBox,
    pub placement: PlacementRecipe,
}

/// A group, a functional λ and the chart data, ready for analysis.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub spec: Arc<LieSplitSpec>,
    pub lambda: Vec<f64>,
    pub index_set: Option<Vec<usize>>,
    pub domain: Option<CoordBox>,
    pub haar: HaarSource,
    pub defaults: Defaults,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightSample {
    pub t: Vec<f64>,
    pub xi: Vec<f64>,
    pub weight: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub entry: String,
    pub n_dim: usize,
    pub r_dim: usize,
    pub validation: ValidationReport,
    pub jacobian: Vec<Vec<f64>>,
    pub immersion: ImmersionReport,
    pub index_set: Vec<usize>,
    pub domain: Option<CoordBox>,
    pub scale: Option<f64>,
    pub haar: String,
    pub weight_samples: Vec<WeightSample>,
    pub chart_error: Option<String>,
}

/// Everything the verify stage needs, serialised as `sampling.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub entry: String,
    pub lambda: Vec<f64>,
    pub index_set: Vec<usize>,
    pub domain: CoordBox,
    pub haar: String,
    pub frequency_box: FrequencyBox,
    pub lattice_spacing: f64,
    pub cover: CoverGammaH,
    pub window: WindowRecipe,
    pub window_steps: Option<Vec<f64>>,
    pub region: CoordBox,
    pub placement: BumpPlacement,
}

pub struct Built {
    pub chart: Arc<ThetaChart>,
    pub window: Window,
    pub cover: CoverGammaH,
    pub fbox: FrequencyBox,
    pub plan: SamplingPlan,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tests: usize,
    pub sum: SumOptions,
    pub thresholds: Thresholds,
    pub bounds_grid: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 1, tests: 5, sum: SumOptions::default(), thresholds: Thresholds::default(), bounds_grid: 16 }
    }
}

impl Problem {
    pub fn chart_options(&self) -> ChartOptions {
        ChartOptions {
            index_set: self.index_set.clone(),
            haar: self.haar.clone(),
            domain: self.domain.clone(),
            ..ChartOptions::default()
        }
    }

    pub fn chart(&self) -> Result<ThetaChart> {
        ThetaChart::build(self.spec.clone(), self.lambda.clone(), self.chart_options())
    }

    /// Validation, D, the immersion test and, when it passes, chart diagnostics with W samples.
    ///
    /// Fails only on an invalid spec; a failed immersion is reported, not raised.
    pub fn analyze(&self) -> Result<AnalysisReport> {
        let validation = self.spec.validate();
        if !validation.is_valid() {
            return Err(FrameError::InvalidSpec(validation.violations.join("; ")));
        }
        if self.lambda.len() != self.spec.n_dim() {
            return Err(FrameError::DimensionMismatch { expected: self.spec.n_dim(), got: self.lambda.len() });
        }
        let d = coadjoint_jacobian(&self.spec, &self.lambda);
        let immersion = immersion_check(&d);
        let jacobian = (0..d.nrows()).map(|i| d.row(i).iter().cloned().collect()).collect();
        let mut report = AnalysisReport {
            entry: self.name.clone(),
            n_dim: self.spec.n_dim(),
            r_dim: self.spec.r_dim(),
            validation,
            jacobian,
            immersion,
            index_set: Vec::new(),
            domain: None,
            scale: None,
            haar: self.haar.label(),
            weight_samples: Vec::new(),
            chart_error: None,
        };
        if !report.immersion.passes {
            return Ok(report);
        }
        match self.chart() {
            Ok(chart) => {
                report.index_set = chart.index_set().to_vec();
                report.domain = Some(chart.domain().clone());
                report.scale = Some(chart.scale());
                let inner = chart.domain().shrink(0.1);
                for t in inner.grid(if chart.dim() <= 1 { 9 } else { 3 }) {
                    let xi = chart.theta(&t);
                    let weight = chart.weight(&xi, WeightMethod::Pushforward)?;
                    report.weight_samples.push(WeightSample { t, xi, weight });
                }
            }
            Err(e) => report.chart_error = Some(e.to_string()),
        }
        Ok(report)
    }

    /// Chart, frequency box, window and cover for a window recipe (the default one when `None`).
    pub fn build(&self, window: Option<WindowRecipe>) -> Result<Built> {
        let validation = self.spec.validate();
        if !validation.is_valid() {
            return Err(FrameError::InvalidSpec(validation.violations.join("; ")));
        }
        let chart = Arc::new(self.chart()?);
        let recipe = window.unwrap_or_else(|| self.defaults.window.clone());
        let fbox = match &self.defaults.frequency {
            FrequencyRecipe::Computed => compute_frequency_box(&chart, SAFETY_FACTOR),
            FrequencyRecipe::Prescribed { half_width, center, fundamental_domain } => {
                let kind = if *fundamental_domain { BoxKind::FundamentalDomain } else { BoxKind::Containing };
                FrequencyBox::prescribed(*half_width, center.clone(), kind)
            }
        };
        let domain = chart.domain().clone();
        let (window, steps) = match &recipe {
            WindowRecipe::SplineParseval { degree } => {
                let (s, steps) = fitted_partition_window(&domain, *degree)?;
                (parseval_window(&chart, &s, &fbox)?, Some(steps))
            }
            WindowRecipe::Indicator => (indicator_window(&chart, &fbox), None),
            WindowRecipe::PartitionOverWeight { degree } => {
                let (s, steps) = fitted_partition_window(&domain, *degree)?;
                let ch = chart.clone();
                let f = s.times(WindowKind::Custom, move |t| match ch.weight_at(t) {
                    Ok(w) => 1.0 / w,
                    Err(_) => f64::NAN,
                });
                (f, Some(steps))
            }
            WindowRecipe::Tabulated { path } => {
                let f = tabulated_window(path)?;
                f.check_inside(&domain)?;
                (f, None)
            }
        };
        // A user-chosen spline window on a tiling group gets the cover its partition needs.
        let cover_recipe = match (&self.defaults.cover, &recipe) {
            (CoverRecipe::Greedy { .. }, _) => self.defaults.cover.clone(),
            (_, WindowRecipe::SplineParseval { .. }) if recipe != self.defaults.window => CoverRecipe::Matched,
            _ => self.defaults.cover.clone(),
        };
        let cover = match &cover_recipe {
            CoverRecipe::Matched => {
                let step = match (&recipe, &steps) {
                    (WindowRecipe::SplineParseval { .. }, Some(s)) => s.clone(),
                    _ => (0..domain.dim()).map(|k| domain.width(k)).collect(),
                };
                build_tiling_cover(&self.spec, step)?
            }
            CoverRecipe::Lattice { step } => build_tiling_cover(&self.spec, step.clone())?,
            CoverRecipe::Greedy { region_radius, separation } => {
                build_greedy_cover(chart.group(), *region_radius, *separation)?
            }
        };
        let placement = match (self.defaults.placement, &cover) {
            (PlacementRecipe::WithinTiles, CoverGammaH::Lattice { step }) => {
                BumpPlacement::WithinTiles { tile: domain.clone(), step: step.clone() }
            }
            _ => BumpPlacement::Region,
        };
        let plan = SamplingPlan {
            entry: self.name.clone(),
            lambda: self.lambda.clone(),
            index_set: chart.index_set().to_vec(),
            domain,
            haar: self.haar.label(),
            lattice_spacing: fbox.spacing(),
            frequency_box: fbox.clone(),
            cover: cover.clone(),
            window: recipe,
            window_steps: steps,
            region: self.defaults.region.clone(),
            placement,
        };
        Ok(Built { chart, window, cover, fbox, plan })
    }
}

impl Built {
    pub fn verify(&self, opts: &VerifyOptions) -> Result<FrameReport> {
        let cfg = VerifyConfig {
            entry: self.plan.entry.clone(),
            window_label: self.plan.window.label(),
            region: self.plan.region.clone(),
            placement: self.plan.placement.clone(),
            seed: opts.seed,
            tests: opts.tests,
            sum: opts.sum,
            thresholds: opts.thresholds,
            bounds_grid: opts.bounds_grid,
            claim_onb: false,
            onb_kappa_count: 5usize.pow(self.chart.dim() as u32),
        };
        verify_frame(&self.chart, &self.window, &self.cover, &self.fbox, &cfg)
    }
}
