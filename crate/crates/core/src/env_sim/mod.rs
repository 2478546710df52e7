//! Seeded simulator of the segmented defended network.
//!
//! Red and green agents are scripted; the five blue agents are driven by the
//! caller through flat action indices and share one team reward.

mod action;
mod config;
pub mod event_log;
mod observation;
mod reward;
mod sim;
mod state;
mod topology;

use thiserror::Error;

pub use action::{ActionLayout, ActionMask, BlueAction};
pub use config::EnvConfig;
pub use observation::{encode_observation, encoded_len, one_hot, ObservationVector};
pub use reward::{compute_shared_reward, PenaltyEvent, PenaltyKind, RewardCategory, RewardTable};
pub use sim::{Environment, StepOutcome};
pub use state::{EpisodeState, HostState, Suspicion};
pub use topology::{build_topology, default_coverage, Edge, NetworkTopology, ZoneId, DEFAULT_EDGES, NUM_BLUE_AGENTS};

use crate::kv::KvError;

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("zone {0} must have at least one host")]
    EmptyDefendedZone(ZoneId),
    #[error("self-loop on zone {0}")]
    SelfLoop(ZoneId),
    #[error("invalid environment config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Kv(#[from] KvError),
    #[error("agent {agent} submitted masked action index {index}")]
    IllegalAction { agent: usize, index: usize },
    #[error("expected {expected} actions, got {got}")]
    WrongActionCount { expected: usize, got: usize },
    #[error("step called on a finished episode")]
    EpisodeDone,
}
