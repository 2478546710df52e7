//! Environment configuration and its key-value file form.

use std::path::Path;

use serde::Serialize;

use crate::kv::{self, KvError};

use super::reward::{RewardCategory, RewardTable};
use super::topology::{build_topology, NetworkTopology, ZoneId, NUM_BLUE_AGENTS};
use super::EnvError;

/// Tunable constants of the simulator. Defaults are the reference scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvConfig {
    pub hosts_per_zone: [usize; ZoneId::COUNT],
    pub max_steps: u32,
    /// Probability that a red presence attempts a lateral move.
    pub red_move_prob: f64,
    /// Probability that a red presence spreads inside its zone; impact takes the rest.
    pub red_spread_prob: f64,
    pub greens_per_zone: usize,
    /// Probability a green does local work instead of accessing a remote service.
    pub green_local_work_prob: f64,
    pub phishing_prob: f64,
    /// Per-step chance that a compromised host raises an alert.
    pub alert_prob: f64,
    pub false_alarm_prob: f64,
    /// Remove only succeeds while a host has been compromised for fewer steps than this.
    pub remove_entrenchment_limit: u32,
    pub reward_table: RewardTable,
    /// Blue agents that act in the episode, in ascending id order.
    pub agents: Vec<usize>,
}

impl Default for EnvConfig {
    fn default() -> Self {
        let mut hosts_per_zone = [3; ZoneId::COUNT];
        hosts_per_zone[ZoneId::Internet as usize] = 0;
        Self {
            hosts_per_zone,
            max_steps: 50,
            red_move_prob: 0.4,
            red_spread_prob: 0.3,
            greens_per_zone: 2,
            green_local_work_prob: 0.5,
            phishing_prob: 0.02,
            alert_prob: 0.5,
            false_alarm_prob: 0.01,
            remove_entrenchment_limit: 3,
            reward_table: RewardTable::default(),
            agents: (0..NUM_BLUE_AGENTS).collect(),
        }
    }
}

impl EnvConfig {
    /// Variant with a single acting blue agent; the rest of the network is unchanged.
    pub fn single_agent(agent: usize) -> Self {
        Self {
            agents: vec![agent],
            ..Self::default()
        }
    }

    pub fn topology(&self) -> Result<NetworkTopology, EnvError> {
        build_topology(self.hosts_per_zone)
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        let probs = [
            ("red_move_prob", self.red_move_prob),
            ("red_spread_prob", self.red_spread_prob),
            ("green_local_work_prob", self.green_local_work_prob),
            ("phishing_prob", self.phishing_prob),
            ("alert_prob", self.alert_prob),
            ("false_alarm_prob", self.false_alarm_prob),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(EnvError::InvalidConfig(format!("{name} = {p} outside [0, 1]")));
            }
        }
        if self.red_move_prob + self.red_spread_prob > 1.0 {
            return Err(EnvError::InvalidConfig(
                "red_move_prob + red_spread_prob exceeds 1".into(),
            ));
        }
        if self.max_steps == 0 {
            return Err(EnvError::InvalidConfig("max_steps must be >= 1".into()));
        }
        if self.agents.is_empty()
            || self.agents.windows(2).any(|w| w[0] >= w[1])
            || self.agents.iter().any(|&a| a >= NUM_BLUE_AGENTS)
        {
            return Err(EnvError::InvalidConfig(format!(
                "agents {:?} must be distinct ascending ids in 0..{NUM_BLUE_AGENTS}",
                self.agents
            )));
        }
        self.topology().map(|_| ())
    }

    /// Applies one `key = value` pair. Returns `Ok(false)` for keys this
    /// config does not own.
    pub fn apply_kv(&mut self, key: &str, value: &str) -> Result<bool, KvError> {
        match key {
            "hosts_per_zone" => {
                let n: usize = kv::parse_value(key, value)?;
                for z in ZoneId::ALL {
                    if z != ZoneId::Internet {
                        self.hosts_per_zone[z as usize] = n;
                    }
                }
            }
            "max_steps" => self.max_steps = kv::parse_value(key, value)?,
            "red_move_prob" => self.red_move_prob = kv::parse_value(key, value)?,
            "red_spread_prob" => self.red_spread_prob = kv::parse_value(key, value)?,
            "greens_per_zone" => self.greens_per_zone = kv::parse_value(key, value)?,
            "green_local_work_prob" => self.green_local_work_prob = kv::parse_value(key, value)?,
            "phishing_prob" => self.phishing_prob = kv::parse_value(key, value)?,
            "alert_prob" => self.alert_prob = kv::parse_value(key, value)?,
            "false_alarm_prob" => self.false_alarm_prob = kv::parse_value(key, value)?,
            "remove_entrenchment_limit" => self.remove_entrenchment_limit = kv::parse_value(key, value)?,
            "agents" => {
                self.agents = value
                    .split(',')
                    .map(|s| kv::parse_value::<usize>(key, s.trim()))
                    .collect::<Result<_, _>>()?;
            }
            _ => {
                if let Some(zone) = key.strip_prefix("hosts.") {
                    let z: ZoneId = zone.parse().map_err(|e| kv::invalid(key, value, e))?;
                    self.hosts_per_zone[z as usize] = kv::parse_value(key, value)?;
                } else if let Some(cat) = key.strip_prefix("reward.") {
                    let category = RewardCategory::ALL
                        .into_iter()
                        .find(|c| c.key() == cat)
                        .ok_or_else(|| KvError::UnknownKey(key.to_string()))?;
                    let vals: Vec<f64> = value
                        .split(',')
                        .map(|s| kv::parse_value::<f64>(key, s.trim()))
                        .collect::<Result<_, _>>()?;
                    let row: [f64; 3] = vals
                        .try_into()
                        .map_err(|_| kv::invalid(key, value, "expected three penalties"))?;
                    self.reward_table
                        .set_row(category, row)
                        .map_err(|e| kv::invalid(key, value, e))?;
                } else {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn from_kv_str(text: &str) -> Result<Self, EnvError> {
        let mut cfg = Self::default();
        for (k, v) in kv::parse(text)? {
            if !cfg.apply_kv(&k, &v)? {
                return Err(KvError::UnknownKey(k).into());
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, EnvError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| EnvError::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::from_kv_str(&text)
    }
}
