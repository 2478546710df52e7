//! Interaction loop: masked sampling from each actor, joint environment step.

use rand::Rng;

use crate::env_sim::{Environment, EpisodeState};
use crate::tensor_nn::{masked_log_softmax, sample_categorical};

use super::agent::AgentSpec;
use super::buffer::{RolloutBuffer, Transition};
use super::config::CriticMode;
use super::seeds::derive_seed;
use super::MarlError;

/// Critic input of `agent`: its own encoding, or all encodings concatenated
/// in agent order.
pub fn make_critic_input(observations: &[&[f64]], agent: usize, mode: CriticMode) -> Result<Vec<f64>, MarlError> {
    if agent >= observations.len() {
        return Err(MarlError::MissingEncoding(agent));
    }
    if let Some(i) = observations.iter().position(|o| o.is_empty()) {
        return Err(MarlError::MissingEncoding(i));
    }
    Ok(match mode {
        CriticMode::Independent => observations[agent].to_vec(),
        CriticMode::Centralized => observations.concat(),
    })
}

/// Ongoing episode plus episode bookkeeping across rollouts.
#[derive(Debug, Clone)]
pub struct Collector {
    state: EpisodeState,
    obs: Vec<Vec<f64>>,
    seed: u64,
    episodes_started: u64,
    episode_return: f64,
    completed: Vec<f64>,
    max_episodes: Option<usize>,
}

const EPISODE_STREAM: u64 = 4;

impl Collector {
    /// Episode `k` is reset with a seed derived from `(seed, k)`.
    pub fn new(env: &Environment, seed: u64, max_episodes: Option<usize>) -> Self {
        let (state, obs) = env.reset(derive_seed(seed, EPISODE_STREAM, 0));
        Self {
            state,
            obs: obs.into_iter().map(|o| o.encoded).collect(),
            seed,
            episodes_started: 1,
            episode_return: 0.0,
            completed: Vec::new(),
            max_episodes,
        }
    }

    /// Undiscounted shared return of every finished episode, in order.
    pub fn episode_returns(&self) -> &[f64] {
        &self.completed
    }

    pub fn finished(&self) -> bool {
        self.max_episodes.is_some_and(|m| self.completed.len() >= m)
    }

    pub fn state(&self) -> &EpisodeState {
        &self.state
    }

    fn start_next_episode(&mut self, env: &Environment) {
        let seed = derive_seed(self.seed, EPISODE_STREAM, self.episodes_started);
        let (state, obs) = env.reset(seed);
        self.state = state;
        self.obs = obs.into_iter().map(|o| o.encoded).collect();
        self.episodes_started += 1;
        self.episode_return = 0.0;
    }
}

/// Fills a buffer of `capacity` transitions, resetting the environment at
/// episode ends. Stops early once the collector's episode budget is spent.
pub fn collect_rollout<R: Rng + ?Sized>(
    env: &Environment,
    collector: &mut Collector,
    agents: &[AgentSpec],
    capacity: usize,
    rng: &mut R,
) -> Result<RolloutBuffer, MarlError> {
    if capacity == 0 {
        return Err(MarlError::Config("rollout capacity must be >= 1".into()));
    }
    if agents.len() != env.num_agents() {
        return Err(MarlError::Config(format!(
            "{} agent specs for {} environment agents",
            agents.len(),
            env.num_agents()
        )));
    }
    let mut buffer = RolloutBuffer::new(capacity);
    while !buffer.is_full() && !collector.finished() {
        let masks = env.masks(&collector.state);
        let mut actions = Vec::with_capacity(agents.len());
        let mut log_probs = Vec::with_capacity(agents.len());
        for (i, agent) in agents.iter().enumerate() {
            let logits = agent.actor.predict(&collector.obs[i])?;
            let lp = masked_log_softmax(&logits, masks[i].as_slice())?;
            let probs: Vec<f64> = lp.iter().map(|v| v.exp()).collect();
            let a = sample_categorical(&probs, rng);
            if !masks[i].allows(a) || !lp[a].is_finite() {
                return Err(MarlError::MaskViolation {
                    agent: agent.agent_id,
                    action: a,
                });
            }
            actions.push(a);
            log_probs.push(lp[a]);
        }
        let outcome = env.step(&mut collector.state, &actions)?;
        let next_obs: Vec<Vec<f64>> = outcome.observations.into_iter().map(|o| o.encoded).collect();
        let obs = std::mem::replace(&mut collector.obs, next_obs.clone());
        buffer.push(Transition {
            joint: obs.concat(),
            obs,
            actions,
            log_probs,
            masks,
            reward: outcome.reward,
            next_joint: next_obs.concat(),
            next_obs,
            done: outcome.done,
        });
        collector.episode_return += outcome.reward;
        if outcome.done {
            collector.completed.push(collector.episode_return);
            if !collector.finished() {
                collector.start_next_episode(env);
            }
        }
    }
    Ok(buffer)
}
