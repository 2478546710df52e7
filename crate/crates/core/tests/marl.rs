mod common;

use acd_marl::env_sim::{EnvConfig, Environment, RewardTable};
use acd_marl::marl::*;
use acd_marl::tensor_nn::{AdamState, MlpParams};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small(algorithm: Algorithm, episodes: usize, seed: u64) -> TrainerConfig {
    TrainerConfig {
        episodes,
        seed,
        hidden: vec![16],
        ..TrainerConfig::for_algorithm(algorithm)
    }
}

#[test]
fn objectives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let a_dim = rng.gen_range(2..6);
        let dims = common::random_dims(&mut rng, a_dim);
        let actor = common::random_mlp(&mut rng, &dims);
        let batch = common::random_actor_batch(&mut rng, &actor, 6, 0.5);
        let (_, g) = a2c_objective_and_grad(&actor, &batch).unwrap();
        let err = common::max_fd_error(&actor, &g, |p| a2c_objective_and_grad(p, &batch).unwrap().0);
        assert!(err < common::FD_TOL, "a2c rel err {err}");
        let (_, g) = ppo_objective_and_grad(&actor, &batch, 0.2).unwrap();
        let err = common::max_fd_error(&actor, &g, |p| ppo_objective_and_grad(p, &batch, 0.2).unwrap().0);
        assert!(err < common::FD_TOL, "ppo rel err {err}");

        let dims = common::random_dims(&mut rng, 1);
        let critic = common::random_mlp(&mut rng, &dims);
        let cb = common::random_critic_batch(&mut rng, &critic, 5);
        let (_, g) = critic_loss_and_grad(&critic, &cb).unwrap();
        let err = common::max_fd_error(&critic, &g, |p| critic_loss_and_grad(p, &cb).unwrap().0);
        assert!(err < common::FD_TOL, "critic rel err {err}");
    }
}

#[test]
fn ppo_surrogate_starts_at_mean_advantage() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let actor = MlpParams::init(&[4, 8, 3], 1).unwrap();
    let batch = common::random_actor_batch(&mut rng, &actor, 20, 0.0);
    let (obj, _) = ppo_objective_and_grad(&actor, &batch, 0.2).unwrap();
    let mean = batch.advantages.iter().sum::<f64>() / 20.0;
    assert!((obj - mean).abs() < 1e-12);
}

#[test]
fn discounted_returns_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.gen_range(1..80);
        let rewards = common::random_vec(&mut rng, n, 5.0);
        let dones: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.05)).collect();
        let gamma = rng.gen_range(0.0..1.0);
        let boot = rng.gen_range(-20.0..0.0);
        let fast = discounted_returns(&rewards, &dones, gamma, boot);
        let slow = common::brute_force_returns(&rewards, &dones, gamma, boot);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-10);
        }
    }
    assert_eq!(
        discounted_returns(&[-1.0, -1.0, -1.0], &[false, false, true], 0.5, 0.0),
        vec![-1.75, -1.5, -1.0]
    );
}

#[test]
fn rollout_is_deterministic_and_legal() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let trainer = Trainer::new(small(Algorithm::Mappo, 3, 8), EnvConfig::default()).unwrap();
    let collect = || {
        let mut c = Collector::new(&env, 8, None);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        collect_rollout(&env, &mut c, trainer.agents(), 120, &mut rng).unwrap()
    };
    let a = collect();
    assert_eq!(a, collect());
    assert_eq!(a.len(), 120);
    assert_eq!(a.dones().iter().filter(|&&d| d).count(), 2);
    for t in a.transitions() {
        for (slot, &act) in t.actions.iter().enumerate() {
            assert!(t.masks[slot].allows(act));
            assert!(t.log_probs[slot].is_finite() && t.log_probs[slot] <= 0.0);
        }
    }
}

#[test]
fn capacity_one_collects_one_transition() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let trainer = Trainer::new(small(Algorithm::Iac, 1, 0), EnvConfig::default()).unwrap();
    let mut c = Collector::new(&env, 0, None);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert_eq!(
        collect_rollout(&env, &mut c, trainer.agents(), 1, &mut rng)
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn training_is_deterministic_per_seed() {
    for algo in Algorithm::ALL {
        let a = train(small(algo, 4, 21), EnvConfig::default()).unwrap();
        assert_eq!(a, train(small(algo, 4, 21), EnvConfig::default()).unwrap());
        assert_eq!(a.len(), 4);
    }
}

#[test]
fn single_agent_maac_equals_iac_step_for_step() {
    let env = EnvConfig::single_agent(0);
    for (central, independent) in [(Algorithm::Maac, Algorithm::Iac), (Algorithm::Mappo, Algorithm::Ippo)] {
        let mut a = Trainer::new(small(central, 6, 5), env.clone()).unwrap();
        let mut b = Trainer::new(small(independent, 6, 5), env.clone()).unwrap();
        while !a.is_finished() {
            let ia = a.iterate().unwrap();
            let ib = b.iterate().unwrap();
            assert_eq!(ia, ib);
            assert_eq!(a.agents(), b.agents());
        }
        assert!(b.is_finished());
        assert_eq!(a.episode_returns(), b.episode_returns());
    }
}

#[test]
fn buffer_is_empty_after_every_update() {
    for algo in [Algorithm::Iac, Algorithm::Ippo] {
        let mut t = Trainer::new(small(algo, 5, 2), EnvConfig::default()).unwrap();
        let mut updates = 0;
        while !t.is_finished() {
            let it = t.iterate().unwrap();
            assert_eq!(
                it.buffer_len_after,
                if it.update.is_some() { 0 } else { it.transitions }
            );
            updates += it.update.is_some() as usize;
        }
        assert_eq!(updates, t.updates());
        assert_eq!(updates, 250 / t.config().steps_to_update);
    }
}

#[test]
fn single_episode_with_large_buffer_records_one_return_without_update() {
    let cfg = TrainerConfig {
        steps_to_update: 64,
        ..small(Algorithm::Iac, 1, 0)
    };
    let mut t = Trainer::new(cfg, EnvConfig::default()).unwrap();
    let before = t.agents().to_vec();
    t.run().unwrap();
    assert_eq!(t.episode_returns().len(), 1);
    assert_eq!(t.updates(), 0);
    assert_eq!(t.agents(), before.as_slice());
}

#[test]
fn zero_reward_table_gives_zero_returns() {
    let env = EnvConfig {
        reward_table: RewardTable::zeros(),
        ..EnvConfig::default()
    };
    for algo in Algorithm::ALL {
        let r = train(small(algo, 3, 1), env.clone()).unwrap();
        assert_eq!(r, vec![0.0; 3]);
    }
}

#[test]
fn ppo_ratios_are_one_right_after_collection() {
    let mut t = Trainer::new(small(Algorithm::Mappo, 6, 9), EnvConfig::default()).unwrap();
    while !t.is_finished() {
        if let Some(stats) = t.iterate().unwrap().update {
            assert!(stats.max_ratio_deviation.unwrap() < 1e-12);
        }
    }
}

#[test]
fn critic_learns_on_a_frozen_batch() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let trainer = Trainer::new(small(Algorithm::Maac, 1, 0), EnvConfig::default()).unwrap();
    let mut c = Collector::new(&env, 0, None);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let buffer = collect_rollout(&env, &mut c, trainer.agents(), 50, &mut rng).unwrap();
    let targets = discounted_returns(&buffer.rewards(), &buffer.dones(), 0.99, 0.0);
    for lr in [0.05, 1e-4] {
        for mode in [CriticMode::Independent, CriticMode::Centralized] {
            let batch = CriticBatch::from_buffer(&buffer, 0, mode, targets.clone());
            let mut critic = MlpParams::init(&[batch.inputs[0].len(), 64, 64, 1], 3).unwrap();
            let mut opt = AdamState::new(&critic);
            let first = critic_loss_and_grad(&critic, &batch).unwrap().0;
            for _ in 0..100 {
                critic_update(&mut critic, &mut opt, &batch, lr).unwrap();
            }
            let last = critic_loss_and_grad(&critic, &batch).unwrap().0;
            assert!(last < first, "lr {lr}: {last} >= {first}");
        }
    }
}

#[test]
fn advantage_identities_hold() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let trainer = Trainer::new(small(Algorithm::Mappo, 1, 0), EnvConfig::default()).unwrap();
    let mut c = Collector::new(&env, 2, None);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let buffer = collect_rollout(&env, &mut c, trainer.agents(), 75, &mut rng).unwrap();
    let agent = &trainer.agents()[4];
    for adv_mode in [AdvantageMode::Td, AdvantageMode::EmpiricalReturn] {
        let b = compute_advantages(&buffer, agent, 4, CriticMode::Centralized, adv_mode, 0.95, false).unwrap();
        for i in 0..buffer.len() {
            assert_eq!(b.advantages[i], b.targets[i] - b.values[i]);
        }
    }
    let td = td_targets(&buffer, agent, 4, CriticMode::Centralized, 0.95).unwrap();
    for (t, y) in buffer.transitions().iter().zip(&td) {
        let v_next = if t.done {
            0.0
        } else {
            agent.value(t.next_critic_input(4, CriticMode::Centralized)).unwrap()
        };
        assert_eq!(*y, t.reward + 0.95 * v_next);
    }
}

#[test]
fn a2c_step_raises_probability_of_advantaged_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut actor = MlpParams::init(&[4, 8, 2], 4).unwrap();
    let mut batch = common::random_actor_batch(&mut rng, &actor, 1, 0.0);
    batch.masks[0] = vec![true, true];
    batch.actions[0] = 0;
    batch.advantages[0] = 1.0;
    let p = |a: &MlpParams| {
        acd_marl::tensor_nn::masked_softmax(&a.predict(&batch.obs[0]).unwrap(), &[true, true]).unwrap()[0]
    };
    let before = p(&actor);
    let mut opt = AdamState::new(&actor);
    a2c_actor_update(&mut actor, &mut opt, &batch, 0.01).unwrap();
    assert!(p(&actor) > before);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn centralized_input_is_concatenation(lens in proptest::collection::vec(1usize..20, 1..6), pick in 0usize..6) {
        let encs: Vec<Vec<f64>> = lens.iter().enumerate().map(|(i, &n)| vec![i as f64; n]).collect();
        let refs: Vec<&[f64]> = encs.iter().map(|v| v.as_slice()).collect();
        let agent = pick % lens.len();
        let x = make_critic_input(&refs, agent, CriticMode::Centralized).unwrap();
        prop_assert_eq!(x.len(), lens.iter().sum::<usize>());
        prop_assert_eq!(x, encs.concat());
        prop_assert_eq!(make_critic_input(&refs, agent, CriticMode::Independent).unwrap(), encs[agent].clone());
    }

    #[test]
    fn returns_match_oracle(rewards in proptest::collection::vec(-5.0f64..0.0, 1..60), gamma in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dones: Vec<bool> = rewards.iter().map(|_| rng.gen_bool(0.1)).collect();
        let fast = discounted_returns(&rewards, &dones, gamma, -3.0);
        let slow = common::brute_force_returns(&rewards, &dones, gamma, -3.0);
        for (a, b) in fast.iter().zip(&slow) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}
