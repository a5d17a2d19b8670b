//! Run configuration: schema-versioned JSON decoded into validated
//! experiment parameters, with command-line overrides applied on top.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::models::{ModelKind, ModelSpec};
use crate::{Error, Result};

/// Version of the configuration layout this build reads.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Random Hermitian pairs against the shift-function trace identity.
    Krein,
    /// Random pairs against the double-operator-integral commutator identity.
    Doi,
    /// One-variable trace lemma on the configured model.
    Lemma1,
    /// Mixed-moment table with closed-form cross-checks.
    Moments,
    /// Two-sided bivariate trace formula on random polynomial pairs.
    Formula,
    /// Moment-based density reconstruction.
    Reconstruct,
    /// Conjugated-pair slice diagnostics and the binned density estimate.
    SsfSlice,
    /// Corner positivity probe.
    Positivity,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Krein => "krein",
            ExperimentKind::Doi => "doi",
            ExperimentKind::Lemma1 => "lemma1",
            ExperimentKind::Moments => "moments",
            ExperimentKind::Formula => "formula",
            ExperimentKind::Reconstruct => "reconstruct",
            ExperimentKind::SsfSlice => "ssf-slice",
            ExperimentKind::Positivity => "positivity",
        }
    }
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

fn default_model() -> String {
    "shift".into()
}

fn default_ambient() -> usize {
    1024
}

fn default_corner() -> usize {
    128
}

fn default_degree() -> usize {
    8
}

fn default_grid() -> usize {
    201
}

fn default_seed() -> u64 {
    7
}

/// Everything a run needs. Every field has a default, so an empty `{}`
/// document (plus an experiment name from the command line) is a valid
/// configuration; JSON fields and command-line flags override the defaults,
/// flags last.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    /// Optional in the file; when present it must match the experiment
    /// selected on the command line.
    #[serde(default)]
    pub experiment: Option<ExperimentKind>,
    #[serde(default = "default_model")]
    pub model: String,
    /// Model family parameters: `c` and `phase` for elliptic, `q` for the
    /// q-weighted family.
    #[serde(default)]
    pub model_parameters: BTreeMap<String, f64>,
    /// Ambient truncation dimension M.
    #[serde(default = "default_ambient")]
    pub ambient_dim: usize,
    /// Corner block size N.
    #[serde(default = "default_corner")]
    pub corner_dim: usize,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_grid")]
    pub grid_size: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Ambient dimensions for sweep mode; empty means a single run.
    #[serde(default)]
    pub sweep: Vec<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Experiment-specific numeric knobs (case counts, bin counts,
    /// tolerance overrides).
    #[serde(default)]
    pub parameters: BTreeMap<String, f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: None,
            model: default_model(),
            model_parameters: BTreeMap::new(),
            ambient_dim: default_ambient(),
            corner_dim: default_corner(),
            degree: default_degree(),
            grid_size: default_grid(),
            seed: default_seed(),
            sweep: Vec::new(),
            output_dir: None,
            parameters: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config { message: format!("cannot read {}: {e}", path.display()) })?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config { message: format!("{}: {e}", path.display()) })
    }

    /// Structural validation; called after overrides are applied.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config {
                message: format!(
                    "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                    self.schema_version
                ),
            });
        }
        self.model_spec()?;
        if !self.sweep.is_empty() {
            if !self.sweep.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Config {
                    message: "sweep dimensions must be strictly ascending".into(),
                });
            }
            for &m in &self.sweep {
                ModelSpec::new(self.model_kind()?, m, self.corner_dim)?;
            }
        }
        Ok(())
    }

    pub fn model_kind(&self) -> Result<ModelKind> {
        let allowed: &[&str] = match self.model.as_str() {
            "shift" => &[],
            "elliptic" => &["c", "phase"],
            "qweighted" | "q_weighted" => &["q"],
            other => {
                return Err(Error::Config {
                    message: format!("unknown model '{other}' (expected shift, elliptic, or qweighted)"),
                })
            }
        };
        for key in self.model_parameters.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Config {
                    message: format!("model '{}' does not take parameter '{key}'", self.model),
                });
            }
        }
        let get = |key: &str, default: f64| self.model_parameters.get(key).copied().unwrap_or(default);
        Ok(match self.model.as_str() {
            "shift" => ModelKind::Shift,
            "elliptic" => ModelKind::Elliptic { c: get("c", 0.3), phase: get("phase", 0.0) },
            _ => ModelKind::QWeighted { q: get("q", 0.5) },
        })
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        ModelSpec::new(self.model_kind()?, self.ambient_dim, self.corner_dim)
    }

    /// Experiment-specific knob with fallback.
    pub fn parameter(&self, key: &str, default: f64) -> f64 {
        self.parameters.get(key).copied().unwrap_or(default)
    }

    /// Hard tolerance for the experiment's pass/fail cases; the `tolerance`
    /// parameter overrides the experiment's documented default.
    pub fn tolerance(&self, default: f64) -> f64 {
        self.parameter("tolerance", default)
    }
}
