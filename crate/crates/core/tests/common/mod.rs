#![allow(dead_code)]

use acd_marl::env_sim::{PenaltyKind, ZoneId};
use acd_marl::marl::{ActorBatch, CriticBatch};
use acd_marl::tensor_nn::{masked_log_softmax, Grads, MlpParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FD_EPS: f64 = 1e-5;
pub const FD_TOL: f64 = 1e-4;

/// Penalty per (zone, kind), written out by hand.
pub fn penalty_oracle(zone: ZoneId, kind: PenaltyKind) -> f64 {
    use PenaltyKind::*;
    use ZoneId::*;
    let row: [f64; 3] = match zone {
        HqPublicAccess | HqAdmin | HqOffice => [-1.0, -1.0, -3.0],
        Contractor => [0.0, -5.0, -5.0],
        RestrictedA | RestrictedB => [-1.0, -3.0, -1.0],
        OperationalA | OperationalB => [-1.0, -1.0, -1.0],
        Internet => [0.0, 0.0, 0.0],
    };
    match kind {
        LocalWorkFail => row[0],
        AccessServiceFail => row[1],
        RedImpactOrAccess => row[2],
    }
}

/// Largest relative error between `analytic` and central differences of `f`.
pub fn max_fd_error(params: &MlpParams, analytic: &Grads, f: impl Fn(&MlpParams) -> f64) -> f64 {
    let grads: Vec<f64> = analytic.values().collect();
    assert_eq!(grads.len(), params.num_params());
    let mut p = params.clone();
    let mut worst: f64 = 0.0;
    for (i, &g) in grads.iter().enumerate() {
        let orig = *p.value_mut(i);
        *p.value_mut(i) = orig + FD_EPS;
        let up = f(&p);
        *p.value_mut(i) = orig - FD_EPS;
        let down = f(&p);
        *p.value_mut(i) = orig;
        let numeric = (up - down) / (2.0 * FD_EPS);
        let scale = g.abs().max(numeric.abs()).max(1e-7);
        worst = worst.max((g - numeric).abs() / scale);
    }
    worst
}

pub fn random_dims(rng: &mut ChaCha8Rng, out: usize) -> Vec<usize> {
    let mut dims = vec![rng.gen_range(2..7)];
    for _ in 0..rng.gen_range(1..3) {
        dims.push(rng.gen_range(3..9));
    }
    dims.push(out);
    dims
}

/// Network with every weight and bias drawn at random, so no pre-activation
/// sits exactly on a ReLU kink.
pub fn random_mlp(rng: &mut ChaCha8Rng, dims: &[usize]) -> MlpParams {
    let mut p = MlpParams::init(dims, rng.gen()).unwrap();
    for i in 0..p.num_params() {
        *p.value_mut(i) = rng.gen_range(-0.8..0.8);
    }
    p
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..scale)).collect()
}

/// Random actor batch whose actions are legal; behaviour log-probs are
/// perturbed so some ratios fall outside the clip range.
pub fn random_actor_batch(rng: &mut ChaCha8Rng, actor: &MlpParams, n: usize, perturb: f64) -> ActorBatch {
    let a_dim = actor.output_dim();
    let mut batch = ActorBatch {
        obs: Vec::new(),
        masks: Vec::new(),
        actions: Vec::new(),
        behavior_log_probs: Vec::new(),
        advantages: Vec::new(),
    };
    for _ in 0..n {
        let obs = random_vec(rng, actor.input_dim(), 1.0);
        let mut mask: Vec<bool> = (0..a_dim).map(|_| rng.gen_bool(0.7)).collect();
        let forced = rng.gen_range(0..a_dim);
        mask[forced] = true;
        let legal: Vec<usize> = (0..a_dim).filter(|&j| mask[j]).collect();
        let action = legal[rng.gen_range(0..legal.len())];
        let lp = masked_log_softmax(&actor.predict(&obs).unwrap(), &mask).unwrap();
        let noise = if perturb > 0.0 {
            rng.gen_range(-perturb..perturb)
        } else {
            0.0
        };
        batch.behavior_log_probs.push(lp[action] + noise);
        batch.obs.push(obs);
        batch.masks.push(mask);
        batch.actions.push(action);
        batch.advantages.push(rng.gen_range(-3.0..3.0));
    }
    batch
}

pub fn random_critic_batch(rng: &mut ChaCha8Rng, critic: &MlpParams, n: usize) -> CriticBatch {
    CriticBatch {
        inputs: (0..n).map(|_| random_vec(rng, critic.input_dim(), 1.0)).collect(),
        targets: random_vec(rng, n, 5.0),
    }
}

/// `sum_k gamma^k r_{t+k}` up to and including the first terminal step.
pub fn brute_force_returns(rewards: &[f64], dones: &[bool], gamma: f64, bootstrap: f64) -> Vec<f64> {
    let n = rewards.len();
    (0..n)
        .map(|t| {
            let mut g = 0.0;
            let mut k = t;
            loop {
                g += gamma.powi((k - t) as i32) * rewards[k];
                if dones[k] {
                    break;
                }
                if k + 1 == n {
                    g += gamma.powi((n - t) as i32) * bootstrap;
                    break;
                }
                k += 1;
            }
            g
        })
        .collect()
}
