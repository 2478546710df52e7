//! Multi-agent actor-critic trainers: IAC, MAAC, IPPO and MAPPO.
//!
//! Every agent owns an actor over its local observation and a critic over
//! either that observation (independent) or the concatenation of all local
//! observations (centralized). Rollouts are collected on-policy with action
//! masking, and the buffer is cleared after each update.

mod advantage;
mod agent;
mod buffer;
mod config;
mod rollout;
mod seeds;
mod trainer;
mod update;

use thiserror::Error;

pub use advantage::{compute_advantages, discounted_returns, normalize_in_place, td_targets, AdvantageBatch};
pub use agent::AgentSpec;
pub use buffer::{RolloutBuffer, Transition};
pub use config::{AdvantageMode, Algorithm, CriticMode, TrainerConfig};
pub use rollout::{collect_rollout, make_critic_input, Collector};
pub use seeds::derive_seed;
pub use trainer::{train, Iteration, Trainer, UpdateStats};
pub use update::{
    a2c_actor_update, a2c_objective_and_grad, critic_loss_and_grad, critic_update, ppo_actor_update,
    ppo_objective_and_grad, ppo_ratios, ActorBatch, CriticBatch,
};

use crate::env_sim::EnvError;
use crate::tensor_nn::NnError;

#[derive(Debug, Error, PartialEq)]
pub enum MarlError {
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("agent {agent}: stored action {action} has zero probability under its mask")]
    MaskViolation { agent: usize, action: usize },
    #[error("missing observation encoding for agent {0}")]
    MissingEncoding(usize),
    #[error("non-finite {0}")]
    NonFinite(&'static str),
    #[error("update on an empty buffer")]
    EmptyBuffer,
    #[error("invalid trainer config: {0}")]
    Config(String),
}
