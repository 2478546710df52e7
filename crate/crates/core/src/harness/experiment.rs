use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::env_sim::{EnvConfig, Environment};
use crate::marl::{collect_rollout, derive_seed, train, AgentSpec, Collector, MarlError};

use super::config::{AlgoChoice, ExperimentConfig};
use super::metrics::MetricsTable;
use super::HarnessError;

const SAMPLING_STREAM: u64 = 3;

/// Episode returns of a policy that picks uniformly among legal actions.
///
/// Episodes are reset with the same seeds a trainer with `seed` would use.
pub fn random_baseline(env_config: EnvConfig, episodes: usize, seed: u64) -> Result<Vec<f64>, MarlError> {
    let env = Environment::new(env_config)?;
    // A zero output layer gives equal logits, so the masked softmax is
    // uniform over the legal set.
    let agents = (0..env.num_agents())
        .map(|slot| {
            let mut agent = AgentSpec::new(
                env.agent_id(slot),
                env.obs_dim(slot),
                env.action_dim(slot),
                env.obs_dim(slot),
                &[],
                0,
                0,
            )?;
            for layer in &mut agent.actor.layers {
                layer.weights.iter_mut().for_each(|w| *w = 0.0);
                layer.biases.iter_mut().for_each(|b| *b = 0.0);
            }
            Ok(agent)
        })
        .collect::<Result<Vec<_>, MarlError>>()?;
    let mut collector = Collector::new(&env, seed, Some(episodes));
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, SAMPLING_STREAM, 0));
    let capacity = env.config().max_steps.max(1) as usize;
    while !collector.finished() {
        collect_rollout(&env, &mut collector, &agents, capacity, &mut rng)?;
    }
    Ok(collector.episode_returns().to_vec())
}

/// Returns of one (algorithm, run) job.
pub fn run_single(config: &ExperimentConfig, algo: AlgoChoice, run: usize) -> Result<Vec<f64>, HarnessError> {
    let wrap = |source: MarlError| HarnessError::Run {
        algorithm: algo.name(),
        run,
        source,
    };
    match algo {
        AlgoChoice::Trained(a) => train(config.trainer_config(a, run)?, config.env_config()).map_err(wrap),
        AlgoChoice::Random => random_baseline(config.env_config(), config.episodes, config.run_seed(run)).map_err(wrap),
    }
}

/// Runs every (algorithm, run) pair in parallel. Rows come back ordered by
/// algorithm (as listed), then run, then episode, whatever the thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<MetricsTable, HarnessError> {
    config.validate()?;
    let jobs: Vec<(AlgoChoice, usize)> = config
        .algorithms
        .iter()
        .flat_map(|&a| (0..config.runs).map(move |r| (a, r)))
        .collect();
    let results: Vec<Vec<f64>> = jobs
        .par_iter()
        .map(|&(a, r)| run_single(config, a, r))
        .collect::<Result<_, _>>()?;
    let mut table = MetricsTable::default();
    for ((algo, run), returns) in jobs.iter().zip(&results) {
        table.push_run(algo.name(), *run, returns);
    }
    Ok(table)
}
