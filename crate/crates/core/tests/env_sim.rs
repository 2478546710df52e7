mod common;

use std::collections::BTreeSet;

use acd_marl::env_sim::event_log::{read_records, write_record, StepRecord};
use acd_marl::env_sim::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_legal(env: &Environment, state: &EpisodeState, rng: &mut ChaCha8Rng) -> Vec<usize> {
    env.masks(state)
        .iter()
        .map(|m| {
            let legal: Vec<usize> = m.legal_indices().collect();
            legal[rng.gen_range(0..legal.len())]
        })
        .collect()
}

#[test]
fn ten_thousand_random_steps_keep_invariants() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut episode = 0;
    let (mut state, _) = env.reset(episode);
    let mut log = Vec::new();
    for _ in 0..10_000 {
        let actions = random_legal(&env, &state, &mut rng);
        let out = env.step(&mut state, &actions).unwrap();
        assert!(state.red_zones.contains(&ZoneId::Contractor));
        assert!(out.reward <= 0.0);
        assert_eq!(out.reward == 0.0, out.events.is_empty());
        for h in &state.hosts {
            if !h.compromised {
                assert_eq!(h.entrenched_steps, 0);
            }
        }
        log.clear();
        write_record(&mut log, &StepRecord::new(state.step - 1, &out.events, out.reward)).unwrap();
        let rec = &read_records(log.as_slice()).unwrap()[0];
        let oracle: f64 = rec.events.iter().map(|e| common::penalty_oracle(e.zone, e.kind)).sum();
        assert_eq!(oracle, rec.reward);
        if out.done {
            episode += 1;
            state = env.reset(episode).0;
        }
    }
}

#[test]
fn reset_is_deterministic_and_quiet() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    for seed in [0, 7, u64::MAX] {
        let (a, obs) = env.reset(seed);
        assert_eq!(a, env.reset(seed).0);
        assert_eq!(a.red_zones.len(), 1);
        assert!(a.red_zones.contains(&ZoneId::Contractor));
        assert_eq!(a.hosts.iter().filter(|h| h.compromised).count(), 1);
        for (slot, o) in obs.iter().enumerate() {
            // host slots alternate (suspicion, decoy)
            let host_slots = 2 * env.layout(slot).hosts.len();
            assert!(o.multidiscrete[..host_slots].iter().step_by(2).all(|&s| s == 0));
        }
    }
}

/// Replays an all-Monitor episode from seed 42 by hand: one uniform draw per
/// red zone, per green (plus its follow-up picks), then one per host.
#[test]
fn three_monitor_steps_from_seed_42_match_hand_trace() {
    const HOSTS: usize = 24;
    // zone -> first global host index; Internet has none
    let offset = |z: u8| -> Option<usize> { (z >= 1).then(|| 3 * (z as usize - 1)) };
    let adj: [&[u8]; 9] = [
        &[1, 2, 5, 7],
        &[0],
        &[0, 3, 4],
        &[2, 4],
        &[2, 3],
        &[0, 6],
        &[5],
        &[0, 8],
        &[7],
    ];
    let zone_of = |z: u8| ZoneId::ALL[z as usize];

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut comp = [false; HOSTS];
    let mut ent = [0u32; HOSTS];
    let mut sus = [0u8; HOSTS];
    let mut red: BTreeSet<u8> = BTreeSet::new();
    comp[rng.gen_range(0..3)] = true;
    red.insert(1);

    let env = Environment::new(EnvConfig::default()).unwrap();
    let (mut state, _) = env.reset(42);

    for _ in 0..3 {
        let mut reward = 0.0;
        let acting: Vec<u8> = red.iter().copied().collect();
        for z in acting {
            let u: f64 = rng.gen();
            if u < 0.4 {
                let t = adj[z as usize][rng.gen_range(0..adj[z as usize].len())];
                if red.contains(&t) {
                    continue;
                }
                if let Some(o) = offset(t) {
                    comp[o + rng.gen_range(0..3)] = true;
                }
                red.insert(t);
            } else if u < 0.7 {
                let o = offset(z).unwrap_or(0);
                let clean: Vec<usize> = (0..3).map(|k| o + k).filter(|&h| !comp[h]).collect();
                if offset(z).is_some() && !clean.is_empty() {
                    comp[clean[rng.gen_range(0..clean.len())]] = true;
                }
            } else if offset(z).is_some_and(|o| (o..o + 3).any(|h| comp[h])) {
                reward += common::penalty_oracle(zone_of(z), PenaltyKind::RedImpactOrAccess);
            }
        }
        for h in 0..HOSTS {
            if comp[h] {
                ent[h] += 1;
            }
        }
        for z in 2u8..=8 {
            let o = offset(z).unwrap();
            for _ in 0..2 {
                let u: f64 = rng.gen();
                if u < 0.5 {
                    if comp[o + rng.gen_range(0..3)] {
                        reward += common::penalty_oracle(zone_of(z), PenaltyKind::LocalWorkFail);
                    }
                } else {
                    let t = adj[z as usize][rng.gen_range(0..adj[z as usize].len())];
                    if let Some(to) = offset(t) {
                        if comp[to + rng.gen_range(0..3)] {
                            reward += common::penalty_oracle(zone_of(t), PenaltyKind::RedImpactOrAccess);
                        }
                    }
                }
                let v: f64 = rng.gen();
                if v < 0.02 && !red.contains(&z) {
                    comp[o + rng.gen_range(0..3)] = true;
                    red.insert(z);
                }
            }
        }
        for h in 0..HOSTS {
            let u: f64 = rng.gen();
            let p = if comp[h] { 0.5 } else { 0.01 };
            if sus[h] == 0 && u < p {
                sus[h] = 1;
            }
        }

        let out = env.step(&mut state, &vec![0; env.num_agents()]).unwrap();
        assert_eq!(out.reward, reward);
        let got_red: BTreeSet<u8> = state.red_zones.iter().map(|&z| z as u8).collect();
        assert_eq!(got_red, red);
        for h in 0..HOSTS {
            assert_eq!(state.hosts[h].compromised, comp[h], "host {h}");
            assert_eq!(state.hosts[h].entrenched_steps, ent[h], "host {h}");
            assert_eq!(state.hosts[h].suspicion as u8, sus[h], "host {h}");
        }
    }
    assert_eq!(state.step, 3);
}

#[test]
fn blue_actions_never_touch_uncovered_zones() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let topo = env.topology();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut state, _) = env.reset(3);
    for _ in 0..2_000 {
        for slot in 0..env.num_agents() {
            let covered: BTreeSet<usize> = topo.covered_hosts(env.agent_id(slot)).into_iter().collect();
            let incident: BTreeSet<Edge> = topo.incident_edges(env.agent_id(slot)).into_iter().collect();
            let mask = env.legal_action_mask(&state, slot);
            for index in mask.legal_indices() {
                let mut probe = state.clone();
                env.apply_action(&mut probe, slot, index).unwrap();
                for h in 0..probe.hosts.len() {
                    if !covered.contains(&h) {
                        assert_eq!(probe.hosts[h], state.hosts[h]);
                    }
                }
                let changed: BTreeSet<Edge> = probe
                    .blocked_edges
                    .symmetric_difference(&state.blocked_edges)
                    .copied()
                    .collect();
                assert!(changed.is_subset(&incident));
                assert!(probe.red_zones.contains(&ZoneId::Contractor));
            }
        }
        let actions = random_legal(&env, &state, &mut rng);
        env.step(&mut state, &actions).unwrap();
        if state.done {
            state = env.reset(rng.gen()).0;
        }
    }
}

#[test]
fn masked_actions_are_rejected() {
    let env = Environment::new(EnvConfig::default()).unwrap();
    let (mut state, _) = env.reset(0);
    let mask = env.legal_action_mask(&state, 0);
    let bad = (0..mask.len()).find(|&i| !mask.allows(i)).unwrap();
    let mut actions = vec![0; env.num_agents()];
    actions[0] = bad;
    assert_eq!(
        env.step(&mut state, &actions),
        Err(EnvError::IllegalAction { agent: 0, index: bad })
    );
}

#[test]
fn zero_reward_table_gives_zero_rewards() {
    let cfg = EnvConfig {
        reward_table: RewardTable::zeros(),
        ..EnvConfig::default()
    };
    let env = Environment::new(cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut state, _) = env.reset(1);
    while !state.done {
        let a = random_legal(&env, &state, &mut rng);
        assert_eq!(env.step(&mut state, &a).unwrap().reward, 0.0);
    }
}

#[test]
fn reward_is_additive_over_event_lists() {
    let t = RewardTable::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let kinds = [
        PenaltyKind::LocalWorkFail,
        PenaltyKind::AccessServiceFail,
        PenaltyKind::RedImpactOrAccess,
    ];
    let mut ev = || PenaltyEvent {
        zone: ZoneId::ALL[rng.gen_range(0..ZoneId::COUNT)],
        kind: kinds[rng.gen_range(0..3)],
        step: 0,
    };
    for _ in 0..100 {
        let a: Vec<PenaltyEvent> = (0..5).map(|_| ev()).collect();
        let b: Vec<PenaltyEvent> = (0..7).map(|_| ev()).collect();
        let ab: Vec<PenaltyEvent> = a.iter().chain(&b).copied().collect();
        let lhs = compute_shared_reward(&t, &ab);
        let rhs = compute_shared_reward(&t, &a) + compute_shared_reward(&t, &b);
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_trajectories_respect_invariants(seed in any::<u64>(), policy_seed in any::<u64>(), steps in 1usize..120) {
        let env = Environment::new(EnvConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(policy_seed);
        let (mut state, _) = env.reset(seed);
        for _ in 0..steps {
            let a = random_legal(&env, &state, &mut rng);
            let out = env.step(&mut state, &a).unwrap();
            prop_assert!(state.red_zones.contains(&ZoneId::Contractor));
            prop_assert!(out.reward <= 0.0);
            for (slot, o) in out.observations.iter().enumerate() {
                prop_assert_eq!(o.encoded.len(), env.obs_dim(slot));
                let ones = o.encoded.iter().filter(|&&x| x == 1.0).count();
                prop_assert_eq!(ones, o.multidiscrete.len());
                prop_assert!(env.legal_action_mask(&state, slot).allows(0));
            }
            if out.done {
                state = env.reset(rng.gen()).0;
            }
        }
    }

    #[test]
    fn step_is_deterministic(seed in any::<u64>(), policy_seed in any::<u64>()) {
        let env = Environment::new(EnvConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(policy_seed);
        let (mut s, _) = env.reset(seed);
        for _ in 0..10 {
            let a = random_legal(&env, &s, &mut rng);
            let mut twin = s.clone();
            let out = env.step(&mut s, &a).unwrap();
            let out2 = env.step(&mut twin, &a).unwrap();
            prop_assert_eq!(&s, &twin);
            prop_assert_eq!(out, out2);
        }
    }
}
