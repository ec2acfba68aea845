//! TOML group specs: load into a [`Problem`], export a [`Problem`] back.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::catalog::get_entry;
use crate::error::{FrameError, Result};
use crate::lie::{HaarSource, LieSplitSpec};
use crate::pipeline::{CoverRecipe, Defaults, FrequencyRecipe, PlacementRecipe, Problem, WindowRecipe};
use crate::sampling::CoordBox;

/// `[i, j, k, value]`, 1-based over (X_1..X_n, A_1..A_r): c_ij^k = value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry(pub usize, pub usize, pub usize, pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationSection {
    pub size: usize,
    /// One row-major matrix per basis element.
    pub matrices: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    /// 1-based indices into X_1..X_n.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_set: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_lo: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_hi: Option<Vec<f64>>,
    /// `maurer-cartan`, `finite-difference` or `catalog:<id>`.
    #[serde(default = "default_haar")]
    pub haar: String,
}

fn default_haar() -> String {
    "maurer-cartan".into()
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub n_dim: usize,
    pub r_dim: usize,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_step: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_step: Option<usize>,
    #[serde(default = "yes")]
    pub h_solvable: bool,
    #[serde(default = "yes")]
    pub h_exponential: bool,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<RealizationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<Defaults>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| FrameError::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| FrameError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text).map_err(|e| FrameError::Parse(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| FrameError::Parse(e.to_string()))
    }

    /// The structure constants, without validation.
    pub fn lie_spec(&self) -> Result<LieSplitSpec> {
        let d = self.n_dim + self.r_dim;
        let mut spec = match &self.realization {
            Some(real) => {
                let mats = real
                    .matrices
                    .iter()
                    .map(|m| {
                        if m.len() != real.size * real.size {
                            return Err(FrameError::InvalidSpec(format!(
                                "realization matrix has {} entries, expected {}",
                                m.len(),
                                real.size * real.size
                            )));
                        }
                        Ok(DMatrix::from_row_slice(real.size, real.size, m))
                    })
                    .collect::<Result<Vec<_>>>()?;
                LieSplitSpec::from_realization(self.name.clone(), self.n_dim, self.r_dim, mats)?
            }
            None => LieSplitSpec::new(self.name.clone(), self.n_dim, self.r_dim),
        };
        let listed: HashSet<(usize, usize, usize)> =
            self.brackets.iter().map(|b| (b.0, b.1, b.2)).collect();
        for b in &self.brackets {
            let BracketEntry(i, j, k, v) = *b;
            if i == 0 || j == 0 || k == 0 || i > d || j > d || k > d {
                return Err(FrameError::InvalidSpec(format!("bracket index out of 1..={d}: {b:?}")));
            }
            if self.realization.is_some() {
                let have = spec.c(i - 1, j - 1, k - 1);
                if (have - v).abs() > 1e-10 {
                    return Err(FrameError::InvalidSpec(format!(
                        "bracket {b:?} disagrees with the realization ({have})"
                    )));
                }
                continue;
            }
            spec.set_raw(i - 1, j - 1, k - 1, v);
            if !listed.contains(&(j, i, k)) {
                spec.set_raw(j - 1, i - 1, k - 1, -v);
            }
        }
        spec.n_nilpotency_step = self.n_step;
        spec.h_nilpotency_step = self.h_step;
        spec.h_solvable = self.h_solvable;
        spec.h_exponential = self.h_exponential;
        Ok(spec)
    }

    pub fn into_problem(self) -> Result<Problem> {
        let spec = self.lie_spec()?;
        if self.lambda.len() != self.n_dim {
            return Err(FrameError::DimensionMismatch { expected: self.n_dim, got: self.lambda.len() });
        }
        let r = self.r_dim;
        let chart = self.chart.clone();
        let (index_set, domain, haar) = match chart {
            Some(c) => {
                let index_set = match c.index_set {
                    Some(j) => {
                        if j.iter().any(|&i| i == 0) {
                            return Err(FrameError::InvalidSpec("index_set is 1-based".into()));
                        }
                        Some(j.iter().map(|i| i - 1).collect())
                    }
                    None => None,
                };
                let domain = match (c.domain_lo, c.domain_hi) {
                    (Some(lo), Some(hi)) => Some(CoordBox::new(lo, hi)?),
                    (None, None) => None,
                    _ => return Err(FrameError::InvalidSpec("domain_lo and domain_hi go together".into())),
                };
                (index_set, domain, parse_haar(&c.haar)?)
            }
            None => (None, None, HaarSource::MaurerCartan),
        };
        let defaults = self.plan.clone().unwrap_or_else(|| Defaults {
            window: WindowRecipe::SplineParseval { degree: 4 },
            cover: if self.h_solvable {
                CoverRecipe::Matched
            } else {
                CoverRecipe::Greedy { region_radius: 2.0, separation: 0.3 }
            },
            frequency: FrequencyRecipe::Computed,
            region: CoordBox::symmetric(r, 2.0),
            placement: PlacementRecipe::Region,
        });
        Ok(Problem { name: self.name, spec: Arc::new(spec), lambda: self.lambda, index_set, domain, haar, defaults })
    }

    /// The file form of a problem; a closed-form Haar density is referenced by catalog id.
    pub fn from_problem(p: &Problem) -> Self {
        let s = &p.spec;
        let brackets = s
            .nonzero_constants()
            .into_iter()
            .filter(|(i, j, _, _)| i < j)
            .map(|(i, j, k, v)| BracketEntry(i + 1, j + 1, k + 1, v))
            .collect();
        let realization = s.realization.as_ref().map(|mats| {
            let size = mats[0].nrows();
            RealizationSection {
                size,
                matrices: mats
                    .iter()
                    .map(|m| (0..size * size).map(|p| m[(p / size, p % size)]).collect())
                    .collect(),
            }
        });
        let haar = match &p.haar {
            HaarSource::MaurerCartan => "maurer-cartan".to_string(),
            HaarSource::FiniteDifference => "finite-difference".to_string(),
            HaarSource::Closed { .. } => format!("catalog:{}", p.name),
        };
        SpecFile {
            name: p.name.clone(),
            n_dim: s.n_dim(),
            r_dim: s.r_dim(),
            lambda: p.lambda.clone(),
            n_step: s.n_nilpotency_step,
            h_step: s.h_nilpotency_step,
            h_solvable: s.h_solvable,
            h_exponential: s.h_exponential,
            brackets,
            realization,
            chart: Some(ChartSection {
                index_set: p.index_set.as_ref().map(|j| j.iter().map(|i| i + 1).collect()),
                domain_lo: p.domain.as_ref().map(|b| b.lo.clone()),
                domain_hi: p.domain.as_ref().map(|b| b.hi.clone()),
                haar,
            }),
            plan: Some(p.defaults.clone()),
        }
    }
}

fn parse_haar(s: &str) -> Result<HaarSource> {
    match s {
        "maurer-cartan" => Ok(HaarSource::MaurerCartan),
        "finite-difference" => Ok(HaarSource::FiniteDifference),
        other => match other.strip_prefix("catalog:") {
            Some(id) => Ok(get_entry(id)?.problem.haar),
            None => Err(FrameError::InvalidSpec(format!("unknown haar source {other:?}"))),
        },
    }
}

/// A catalog id or a path to a TOML spec file.
pub fn load_problem(input: &str) -> Result<Problem> {
    if let Ok(entry) = get_entry(input) {
        return Ok(entry.problem);
    }
    let path = Path::new(input);
    if !path.exists() {
        return Err(FrameError::UnknownCatalog(format!("{input} (neither a catalog id nor a file)")));
    }
    SpecFile::load(path)?.into_problem()
}
