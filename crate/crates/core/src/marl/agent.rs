use crate::tensor_nn::{AdamState, MlpParams};

use super::config::CriticMode;
use super::MarlError;

/// Actor, critic and their optimizer state for one blue agent. Nothing is
/// shared between agents.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentSpec {
    pub agent_id: usize,
    pub obs_dim: usize,
    pub action_dim: usize,
    pub actor: MlpParams,
    pub critic: MlpParams,
    pub actor_opt: AdamState,
    pub critic_opt: AdamState,
}

impl AgentSpec {
    /// `critic_input_dim` is the agent's own `obs_dim` for independent critics
    /// or the joint observation length for centralized ones.
    pub fn new(
        agent_id: usize,
        obs_dim: usize,
        action_dim: usize,
        critic_input_dim: usize,
        hidden: &[usize],
        actor_seed: u64,
        critic_seed: u64,
    ) -> Result<Self, MarlError> {
        let dims = |input: usize, output: usize| -> Vec<usize> {
            std::iter::once(input)
                .chain(hidden.iter().copied())
                .chain(std::iter::once(output))
                .collect()
        };
        let actor = MlpParams::init(&dims(obs_dim, action_dim), actor_seed)?;
        let critic = MlpParams::init(&dims(critic_input_dim, 1), critic_seed)?;
        Ok(Self {
            agent_id,
            obs_dim,
            action_dim,
            actor_opt: AdamState::new(&actor),
            critic_opt: AdamState::new(&critic),
            actor,
            critic,
        })
    }

    pub fn critic_input_dim(&self) -> usize {
        self.critic.input_dim()
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, MarlError> {
        Ok(self.critic.predict(x)?[0])
    }

    pub fn matches_mode(&self, mode: CriticMode, joint_dim: usize) -> bool {
        match mode {
            CriticMode::Independent => self.critic_input_dim() == self.obs_dim,
            CriticMode::Centralized => self.critic_input_dim() == joint_dim,
        }
    }
}
