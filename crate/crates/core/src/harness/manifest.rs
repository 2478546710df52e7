use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::env_sim::EnvConfig;
use crate::marl::TrainerConfig;

use super::config::{AlgoChoice, ExperimentConfig};
use super::HarnessError;

/// Everything needed to rerun an experiment, stored next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub crate_version: &'static str,
    pub algorithms: Vec<AlgoChoice>,
    pub runs: usize,
    pub episodes: usize,
    pub max_steps: u32,
    pub base_seed: u64,
    pub run_seeds: Vec<u64>,
    pub smoothing_window: usize,
    pub env: EnvConfig,
    pub trainers: Vec<TrainerConfig>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig, outputs: Vec<PathBuf>) -> Result<Self, HarnessError> {
        let trainers = config
            .algorithms
            .iter()
            .filter_map(|a| match a {
                AlgoChoice::Trained(a) => Some(config.trainer_config(*a, 0)),
                AlgoChoice::Random => None,
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            crate_version: env!("CARGO_PKG_VERSION"),
            algorithms: config.algorithms.clone(),
            runs: config.runs,
            episodes: config.episodes,
            max_steps: config.max_steps,
            base_seed: config.base_seed,
            run_seeds: (0..config.runs).map(|r| config.run_seed(r)).collect(),
            smoothing_window: config.smoothing_window,
            env: config.env_config(),
            trainers,
            outputs,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| HarnessError::Invalid(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            source: e,
        })
    }
}
