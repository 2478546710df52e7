use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::kv::{self, KvError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Independent actor-critic.
    Iac,
    /// Actor-critic with centralized critics.
    Maac,
    /// Independent PPO.
    Ippo,
    /// PPO with centralized critics.
    Mappo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Iac, Algorithm::Maac, Algorithm::Ippo, Algorithm::Mappo];

    pub fn is_ppo(self) -> bool {
        matches!(self, Algorithm::Ippo | Algorithm::Mappo)
    }

    pub fn critic_mode(self) -> CriticMode {
        match self {
            Algorithm::Iac | Algorithm::Ippo => CriticMode::Independent,
            Algorithm::Maac | Algorithm::Mappo => CriticMode::Centralized,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Iac => "iac",
            Algorithm::Maac => "maac",
            Algorithm::Ippo => "ippo",
            Algorithm::Mappo => "mappo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected iac, maac, ippo or mappo)"))
    }
}

/// What the critic conditions on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriticMode {
    /// The agent's own local observation.
    Independent,
    /// Concatenation of every agent's local observation, in agent order.
    Centralized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdvantageMode {
    /// One-step TD error `r + gamma V(x') - V(x)`.
    Td,
    /// Discounted return-to-go minus `V(x)`.
    EmpiricalReturn,
}

impl FromStr for AdvantageMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "td" => Ok(AdvantageMode::Td),
            "empirical_return" => Ok(AdvantageMode::EmpiricalReturn),
            _ => Err(format!(
                "unknown advantage mode `{s}` (expected td or empirical_return)"
            )),
        }
    }
}

impl fmt::Display for AdvantageMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdvantageMode::Td => "td",
            AdvantageMode::EmpiricalReturn => "empirical_return",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerConfig {
    pub algorithm: Algorithm,
    pub gamma: f64,
    pub lr: f64,
    pub clip: f64,
    pub ppo_epochs: usize,
    /// Rollout buffer capacity; an update fires each time it fills.
    pub steps_to_update: usize,
    pub advantage_mode: AdvantageMode,
    pub normalize_advantage: bool,
    pub hidden: Vec<usize>,
    pub seed: u64,
    pub episodes: usize,
}

impl TrainerConfig {
    /// Reference hyperparameters for each algorithm family.
    pub fn for_algorithm(algorithm: Algorithm) -> Self {
        let (lr, gamma, steps) = if algorithm.is_ppo() {
            (1e-4, 0.95, 100)
        } else {
            (0.05, 0.99, 50)
        };
        Self {
            algorithm,
            gamma,
            lr,
            clip: 0.2,
            ppo_epochs: 4,
            steps_to_update: steps,
            advantage_mode: AdvantageMode::EmpiricalReturn,
            normalize_advantage: false,
            hidden: vec![64, 64],
            seed: 0,
            episodes: 1000,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(format!("gamma = {} outside [0, 1]", self.gamma));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(format!("lr = {} must be positive", self.lr));
        }
        if !(self.clip > 0.0 && self.clip < 1.0) {
            return Err(format!("clip = {} outside (0, 1)", self.clip));
        }
        if self.ppo_epochs == 0 {
            return Err("epochs must be >= 1".into());
        }
        if self.steps_to_update == 0 {
            return Err("steps_to_update must be >= 1".into());
        }
        if self.episodes == 0 {
            return Err("episodes must be >= 1".into());
        }
        if self.hidden.contains(&0) {
            return Err("hidden layer widths must be >= 1".into());
        }
        Ok(())
    }

    /// Applies one `key = value` pair; `Ok(false)` for keys owned elsewhere.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<bool, KvError> {
        match key {
            "algorithm" => self.algorithm = value.parse().map_err(|e| kv::invalid(key, value, e))?,
            "gamma" => self.gamma = kv::parse_value(key, value)?,
            "lr" => self.lr = kv::parse_value(key, value)?,
            "clip" => self.clip = kv::parse_value(key, value)?,
            "epochs" => self.ppo_epochs = kv::parse_value(key, value)?,
            "steps_to_update" => self.steps_to_update = kv::parse_value(key, value)?,
            "advantage_mode" => self.advantage_mode = value.parse().map_err(|e| kv::invalid(key, value, e))?,
            "normalize_advantage" => self.normalize_advantage = kv::parse_value(key, value)?,
            "seed" => self.seed = kv::parse_value(key, value)?,
            "episodes" => self.episodes = kv::parse_value(key, value)?,
            "hidden" => {
                self.hidden = value
                    .split(',')
                    .map(|s| kv::parse_value::<usize>(key, s.trim()))
                    .collect::<Result<_, _>>()?
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}
