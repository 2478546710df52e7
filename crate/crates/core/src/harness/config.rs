use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::env_sim::EnvConfig;
use crate::kv::{self, KvError};
use crate::marl::{Algorithm, TrainerConfig};

use super::HarnessError;

/// A trained algorithm or the uniform-over-legal-actions control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "String")]
pub enum AlgoChoice {
    Trained(Algorithm),
    Random,
}

impl AlgoChoice {
    pub fn name(self) -> &'static str {
        match self {
            AlgoChoice::Trained(a) => a.name(),
            AlgoChoice::Random => "random",
        }
    }
}

impl From<AlgoChoice> for String {
    fn from(a: AlgoChoice) -> String {
        a.name().to_string()
    }
}

impl fmt::Display for AlgoChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("random") {
            Ok(AlgoChoice::Random)
        } else {
            s.parse().map(AlgoChoice::Trained)
        }
    }
}

fn parse_algorithms(value: &str) -> Result<Vec<AlgoChoice>, String> {
    let algos = value
        .split(',')
        .map(|s| s.trim().parse::<AlgoChoice>())
        .collect::<Result<Vec<_>, _>>()?;
    if algos.is_empty() {
        return Err("no algorithms given".into());
    }
    Ok(algos)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithms: Vec<AlgoChoice>,
    pub runs: usize,
    pub episodes: usize,
    pub max_steps: u32,
    /// Run `i` trains with seed `base_seed + i`.
    pub base_seed: u64,
    pub out_dir: PathBuf,
    pub smoothing_window: usize,
    pub env: EnvConfig,
    /// Trainer `key = value` overrides applied on top of each algorithm's defaults.
    pub trainer_overrides: Vec<(String, String)>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: Algorithm::ALL.into_iter().map(AlgoChoice::Trained).collect(),
            runs: 25,
            episodes: 1000,
            max_steps: 50,
            base_seed: 0,
            out_dir: PathBuf::from("results"),
            smoothing_window: 20,
            env: EnvConfig::default(),
            trainer_overrides: Vec::new(),
        }
    }
}

/// Values given on the command line; `None` falls back to the file, then defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CliOverrides {
    pub algorithms: Option<Vec<AlgoChoice>>,
    pub runs: Option<usize>,
    pub episodes: Option<usize>,
    pub max_steps: Option<u32>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub smoothing_window: Option<usize>,
}

impl ExperimentConfig {
    /// Trainer configuration of one run.
    pub fn trainer_config(&self, algorithm: Algorithm, run: usize) -> Result<TrainerConfig, HarnessError> {
        let mut cfg = TrainerConfig::for_algorithm(algorithm);
        for (k, v) in &self.trainer_overrides {
            cfg.apply_kv(k, v)?;
        }
        cfg.algorithm = algorithm;
        cfg.episodes = self.episodes;
        cfg.seed = self.run_seed(run);
        cfg.validate().map_err(HarnessError::Invalid)?;
        Ok(cfg)
    }

    pub fn env_config(&self) -> EnvConfig {
        EnvConfig {
            max_steps: self.max_steps,
            ..self.env.clone()
        }
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::Invalid("runs must be >= 1".into()));
        }
        if self.episodes == 0 {
            return Err(HarnessError::Invalid("episodes must be >= 1".into()));
        }
        if self.max_steps == 0 {
            return Err(HarnessError::Invalid("max_steps must be >= 1".into()));
        }
        if self.smoothing_window == 0 {
            return Err(HarnessError::Invalid("window must be >= 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Invalid("no algorithms selected".into()));
        }
        self.env_config()
            .validate()
            .map_err(|e| HarnessError::Invalid(e.to_string()))?;
        for algo in &self.algorithms {
            if let AlgoChoice::Trained(a) = algo {
                self.trainer_config(*a, 0)?;
            }
        }
        Ok(())
    }

    fn apply_kv(&mut self, key: &str, value: &str) -> Result<(), KvError> {
        match key {
            "algorithms" | "algo" => {
                self.algorithms = parse_algorithms(value).map_err(|e| kv::invalid(key, value, e))?
            }
            "runs" => self.runs = kv::parse_value(key, value)?,
            "episodes" => self.episodes = kv::parse_value(key, value)?,
            "max_steps" => self.max_steps = kv::parse_value(key, value)?,
            "seed" => self.base_seed = kv::parse_value(key, value)?,
            "out" => self.out_dir = PathBuf::from(value),
            "window" => self.smoothing_window = kv::parse_value(key, value)?,
            _ => {
                if self.env.apply_kv(key, value)? {
                    return Ok(());
                }
                let mut probe = TrainerConfig::for_algorithm(Algorithm::Iac);
                if !probe.apply_kv(key, value)? || key == "algorithm" {
                    return Err(KvError::UnknownKey(key.to_string()));
                }
                self.trainer_overrides.push((key.to_string(), value.to_string()));
            }
        }
        Ok(())
    }
}

/// Defaults, then the optional config file, then CLI flags.
pub fn parse_config(cli: &CliOverrides, file: Option<&Path>) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        for (k, v) in kv::parse(&text)? {
            cfg.apply_kv(&k, &v)?;
        }
    }
    if let Some(a) = &cli.algorithms {
        cfg.algorithms = a.clone();
    }
    if let Some(v) = cli.runs {
        cfg.runs = v;
    }
    if let Some(v) = cli.episodes {
        cfg.episodes = v;
    }
    if let Some(v) = cli.max_steps {
        cfg.max_steps = v;
    }
    if let Some(v) = cli.seed {
        cfg.base_seed = v;
    }
    if let Some(v) = &cli.out_dir {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = cli.smoothing_window {
        cfg.smoothing_window = v;
    }
    cfg.validate()?;
    Ok(cfg)
}
