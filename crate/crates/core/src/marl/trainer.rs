//! The on-policy training loop shared by all four algorithms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::env_sim::{EnvConfig, Environment};

use super::advantage::compute_advantages;
use super::agent::AgentSpec;
use super::buffer::RolloutBuffer;
use super::config::TrainerConfig;
use super::rollout::{collect_rollout, Collector};
use super::seeds::derive_seed;
use super::update::{a2c_actor_update, critic_update, ppo_actor_update, ppo_ratios, ActorBatch, CriticBatch};
use super::MarlError;

const ACTOR_STREAM: u64 = 1;
const CRITIC_STREAM: u64 = 2;
const SAMPLING_STREAM: u64 = 3;

/// Diagnostics of one update, one entry per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateStats {
    /// Critic loss before the first step.
    pub critic_losses: Vec<f64>,
    /// Actor objective before the first step.
    pub actor_objectives: Vec<f64>,
    /// PPO only: `max |rho - 1|` over the buffer before any actor step.
    pub max_ratio_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Iteration {
    pub transitions: usize,
    pub update: Option<UpdateStats>,
    /// Buffer length after the iteration (zero once an update has run).
    pub buffer_len_after: usize,
}

pub struct Trainer {
    config: TrainerConfig,
    env: Environment,
    agents: Vec<AgentSpec>,
    collector: Collector,
    rng: ChaCha8Rng,
    updates: usize,
}

impl Trainer {
    pub fn new(config: TrainerConfig, env_config: EnvConfig) -> Result<Self, MarlError> {
        config.validate().map_err(MarlError::Config)?;
        let env = Environment::new(env_config)?;
        let joint_dim: usize = (0..env.num_agents()).map(|s| env.obs_dim(s)).sum();
        let mode = config.algorithm.critic_mode();
        let agents = (0..env.num_agents())
            .map(|slot| {
                let id = env.agent_id(slot);
                let obs_dim = env.obs_dim(slot);
                let critic_dim = match mode {
                    super::CriticMode::Independent => obs_dim,
                    super::CriticMode::Centralized => joint_dim,
                };
                AgentSpec::new(
                    id,
                    obs_dim,
                    env.action_dim(slot),
                    critic_dim,
                    &config.hidden,
                    derive_seed(config.seed, ACTOR_STREAM, id as u64),
                    derive_seed(config.seed, CRITIC_STREAM, id as u64),
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        let collector = Collector::new(&env, config.seed, Some(config.episodes));
        let rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, SAMPLING_STREAM, 0));
        Ok(Self {
            config,
            env,
            agents,
            collector,
            rng,
            updates: 0,
        })
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn agents(&self) -> &[AgentSpec] {
        &self.agents
    }

    pub fn updates(&self) -> usize {
        self.updates
    }

    pub fn is_finished(&self) -> bool {
        self.collector.finished()
    }

    pub fn episode_returns(&self) -> &[f64] {
        self.collector.episode_returns()
    }

    /// Collects up to `steps_to_update` transitions and updates every agent
    /// if the buffer filled.
    pub fn iterate(&mut self) -> Result<Iteration, MarlError> {
        let mut buffer = self.collect()?;
        let transitions = buffer.len();
        let update = if buffer.is_full() {
            Some(self.update(&mut buffer)?)
        } else {
            None
        };
        Ok(Iteration {
            transitions,
            update,
            buffer_len_after: buffer.len(),
        })
    }

    pub fn collect(&mut self) -> Result<RolloutBuffer, MarlError> {
        collect_rollout(
            &self.env,
            &mut self.collector,
            &self.agents,
            self.config.steps_to_update,
            &mut self.rng,
        )
    }

    /// Critic and actor update for every agent, then clears the buffer.
    pub fn update(&mut self, buffer: &mut RolloutBuffer) -> Result<UpdateStats, MarlError> {
        let cfg = &self.config;
        let mode = cfg.algorithm.critic_mode();
        let mut stats = UpdateStats {
            critic_losses: Vec::with_capacity(self.agents.len()),
            actor_objectives: Vec::with_capacity(self.agents.len()),
            max_ratio_deviation: None,
        };
        for (slot, agent) in self.agents.iter_mut().enumerate() {
            let adv = compute_advantages(
                buffer,
                agent,
                slot,
                mode,
                cfg.advantage_mode,
                cfg.gamma,
                cfg.normalize_advantage,
            )?;
            let critic_batch = CriticBatch::from_buffer(buffer, slot, mode, adv.targets);
            let actor_batch = ActorBatch::from_buffer(buffer, slot, adv.advantages);
            if cfg.algorithm.is_ppo() {
                let dev = ppo_ratios(&agent.actor, &actor_batch)?
                    .into_iter()
                    .map(|r| (r - 1.0).abs())
                    .fold(0.0, f64::max);
                stats.max_ratio_deviation = Some(stats.max_ratio_deviation.unwrap_or(0.0).max(dev));
                let mut first_loss = None;
                for _ in 0..cfg.ppo_epochs {
                    let loss = critic_update(&mut agent.critic, &mut agent.critic_opt, &critic_batch, cfg.lr)?;
                    first_loss.get_or_insert(loss);
                }
                stats.critic_losses.push(first_loss.unwrap_or(0.0));
                stats.actor_objectives.push(ppo_actor_update(
                    &mut agent.actor,
                    &mut agent.actor_opt,
                    &actor_batch,
                    cfg.clip,
                    cfg.ppo_epochs,
                    cfg.lr,
                )?);
            } else {
                stats.critic_losses.push(critic_update(
                    &mut agent.critic,
                    &mut agent.critic_opt,
                    &critic_batch,
                    cfg.lr,
                )?);
                stats.actor_objectives.push(a2c_actor_update(
                    &mut agent.actor,
                    &mut agent.actor_opt,
                    &actor_batch,
                    cfg.lr,
                )?);
            }
        }
        buffer.clear();
        self.updates += 1;
        Ok(stats)
    }

    /// Runs until the episode budget is spent.
    pub fn run(&mut self) -> Result<(), MarlError> {
        while !self.is_finished() {
            self.iterate()?;
        }
        Ok(())
    }
}

/// Trains from scratch and returns the undiscounted shared return of every episode.
pub fn train(config: TrainerConfig, env_config: EnvConfig) -> Result<Vec<f64>, MarlError> {
    let mut trainer = Trainer::new(config, env_config)?;
    trainer.run()?;
    Ok(trainer.episode_returns().to_vec())
}
