//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::env::{EnvironmentSpec, Regime};
use crate::error::{Error, Result};
use crate::learner::Estimator;

/// Seeds of an experiment: an explicit list or a contiguous range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedList {
    List(Vec<u64>),
    Range { first: u64, count: u64 },
}

impl SeedList {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedList::List(v) => v.clone(),
            SeedList::Range { first, count } => (*first..first + count).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerConfig {
    pub estimator: Estimator,
}

/// Output file names, relative to the output directory unless absolute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub regret_csv: PathBuf,
    pub weights_csv: PathBuf,
}

/// A complete experiment description. Every field is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub environment: Regime,
    pub horizon: u64,
    pub learner: LearnerConfig,
    /// Key of every random stream in the experiment.
    pub master_seed: u64,
    pub seeds: SeedList,
    /// Rounds at which regret and bounds are reported; sorted, within `1..=horizon`.
    pub checkpoints: Vec<u64>,
    /// Every `weights_stride`-th round (starting at round 1) goes to the weights file.
    pub weights_stride: u64,
    pub output: OutputPaths,
}

/// Largest seed index; each seed uses two ChaCha streams, `2s` and `2s + 1`.
pub const MAX_SEED: u64 = u64::MAX / 2;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("invalid experiment config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn environment_spec(&self) -> Result<EnvironmentSpec> {
        EnvironmentSpec::new(self.environment.clone(), self.horizon)
    }

    pub fn validate(&self) -> Result<()> {
        self.environment_spec()?;
        let seeds = self.seeds.seeds();
        if seeds.is_empty() {
            return Err(Error::config("at least one seed is required"));
        }
        if seeds.iter().any(|&s| s > MAX_SEED) {
            return Err(Error::config(format!("seeds must not exceed {MAX_SEED}")));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::config("seeds must be distinct"));
        }
        if self.checkpoints.is_empty() {
            return Err(Error::config("at least one checkpoint is required"));
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("checkpoints must be strictly increasing"));
        }
        if self.checkpoints[0] == 0 || *self.checkpoints.last().unwrap() > self.horizon {
            return Err(Error::config(format!(
                "checkpoints must lie in 1..={}",
                self.horizon
            )));
        }
        if self.weights_stride == 0 {
            return Err(Error::config("weights_stride must be at least 1"));
        }
        Ok(())
    }
}

/// `T 2^{j-10}` for `j = 0..=10`, rounded and deduplicated.
pub fn geometric_checkpoints(horizon: u64) -> Vec<u64> {
    let mut points: Vec<u64> = (0..=10)
        .map(|j| ((horizon as f64) * 2f64.powi(j - 10)).round().max(1.0) as u64)
        .collect();
    points.dedup();
    *points.last_mut().unwrap() = horizon;
    points
}
