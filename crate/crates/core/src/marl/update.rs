//! Critic regression, policy-gradient and clipped-surrogate updates.
//!
//! Objective functions return the objective and its gradient with respect to
//! the network parameters. Actor objectives are maximized, so the update
//! functions step Adam along the negated gradient.

use crate::tensor_nn::{adam_step, masked_log_softmax, AdamState, Grads, MlpParams};

use super::buffer::RolloutBuffer;
use super::config::CriticMode;
use super::MarlError;

#[derive(Debug, Clone, PartialEq)]
pub struct CriticBatch {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl CriticBatch {
    pub fn from_buffer(buffer: &RolloutBuffer, slot: usize, mode: CriticMode, targets: Vec<f64>) -> Self {
        Self {
            inputs: buffer
                .transitions()
                .iter()
                .map(|t| t.critic_input(slot, mode).to_vec())
                .collect(),
            targets,
        }
    }
}

/// Per-agent slice of a rollout; advantages are constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ActorBatch {
    pub obs: Vec<Vec<f64>>,
    pub masks: Vec<Vec<bool>>,
    pub actions: Vec<usize>,
    pub behavior_log_probs: Vec<f64>,
    pub advantages: Vec<f64>,
}

impl ActorBatch {
    pub fn from_buffer(buffer: &RolloutBuffer, slot: usize, advantages: Vec<f64>) -> Self {
        let ts = buffer.transitions();
        Self {
            obs: ts.iter().map(|t| t.obs[slot].clone()).collect(),
            masks: ts.iter().map(|t| t.masks[slot].0.clone()).collect(),
            actions: ts.iter().map(|t| t.actions[slot]).collect(),
            behavior_log_probs: ts.iter().map(|t| t.log_probs[slot]).collect(),
            advantages,
        }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

/// Mean squared error `(1/n) sum (y - V)^2` and its gradient.
pub fn critic_loss_and_grad(critic: &MlpParams, batch: &CriticBatch) -> Result<(f64, Grads), MarlError> {
    let n = batch.inputs.len();
    if n == 0 || batch.targets.len() != n {
        return Err(MarlError::EmptyBuffer);
    }
    let mut grads = Grads::zeros_like(critic);
    let mut loss = 0.0;
    for (x, &y) in batch.inputs.iter().zip(&batch.targets) {
        let (out, cache) = critic.forward(x)?;
        let err = out[0] - y;
        loss += err * err;
        critic.backward_into(&cache, &[2.0 * err / n as f64], &mut grads)?;
    }
    let loss = loss / n as f64;
    if !loss.is_finite() {
        return Err(MarlError::NonFinite("critic loss"));
    }
    Ok((loss, grads))
}

/// One Adam step on the critic MSE. Returns the loss before the step.
pub fn critic_update(
    critic: &mut MlpParams,
    opt: &mut AdamState,
    batch: &CriticBatch,
    lr: f64,
) -> Result<f64, MarlError> {
    let (loss, grads) = critic_loss_and_grad(critic, batch)?;
    adam_step(critic, &grads, opt, lr)?;
    Ok(loss)
}

/// Shared per-sample pass: masked log-probs of the taken action, and a
/// callback turning (log pi, sample index) into (objective term, dJ/dlog pi).
fn actor_objective<F>(actor: &MlpParams, batch: &ActorBatch, mut term: F) -> Result<(f64, Grads), MarlError>
where
    F: FnMut(usize, f64) -> Result<(f64, f64), MarlError>,
{
    let n = batch.len();
    if n == 0 {
        return Err(MarlError::EmptyBuffer);
    }
    let mut grads = Grads::zeros_like(actor);
    let mut objective = 0.0;
    for i in 0..n {
        let (logits, cache) = actor.forward(&batch.obs[i])?;
        let lp = masked_log_softmax(&logits, &batch.masks[i])?;
        let a = batch.actions[i];
        if a >= lp.len() || !lp[a].is_finite() {
            return Err(MarlError::MaskViolation { agent: i, action: a });
        }
        let (value, coeff) = term(i, lp[a])?;
        objective += value;
        if coeff != 0.0 {
            // d log pi(a) / d z_j = 1[j = a] - p_j on legal j, 0 on masked j
            let scale = coeff / n as f64;
            let grad_logits: Vec<f64> = lp
                .iter()
                .enumerate()
                .map(|(j, &l)| {
                    let p = if l.is_finite() { l.exp() } else { 0.0 };
                    scale * ((j == a) as u8 as f64 - p)
                })
                .collect();
            actor.backward_into(&cache, &grad_logits, &mut grads)?;
        }
    }
    Ok((objective / n as f64, grads))
}

/// `(1/n) sum log pi(a|o) * A` and its gradient.
pub fn a2c_objective_and_grad(actor: &MlpParams, batch: &ActorBatch) -> Result<(f64, Grads), MarlError> {
    actor_objective(actor, batch, |i, lp| {
        let adv = batch.advantages[i];
        Ok((lp * adv, adv))
    })
}

/// One ascent step on the policy-gradient objective. Returns the objective before the step.
pub fn a2c_actor_update(
    actor: &mut MlpParams,
    opt: &mut AdamState,
    batch: &ActorBatch,
    lr: f64,
) -> Result<f64, MarlError> {
    let (objective, mut grads) = a2c_objective_and_grad(actor, batch)?;
    grads.scale(-1.0);
    adam_step(actor, &grads, opt, lr)?;
    Ok(objective)
}

/// `pi(a|o) / pi_behaviour(a|o)` for every sample.
pub fn ppo_ratios(actor: &MlpParams, batch: &ActorBatch) -> Result<Vec<f64>, MarlError> {
    (0..batch.len())
        .map(|i| {
            let logits = actor.predict(&batch.obs[i])?;
            let lp = masked_log_softmax(&logits, &batch.masks[i])?;
            let rho = (lp[batch.actions[i]] - batch.behavior_log_probs[i]).exp();
            if rho.is_finite() {
                Ok(rho)
            } else {
                Err(MarlError::NonFinite("probability ratio"))
            }
        })
        .collect()
}

/// Clipped surrogate `(1/n) sum min(rho A, clamp(rho, 1-eps, 1+eps) A)` and its gradient.
pub fn ppo_objective_and_grad(actor: &MlpParams, batch: &ActorBatch, clip: f64) -> Result<(f64, Grads), MarlError> {
    actor_objective(actor, batch, |i, lp| {
        let adv = batch.advantages[i];
        let rho = (lp - batch.behavior_log_probs[i]).exp();
        if !rho.is_finite() {
            return Err(MarlError::NonFinite("probability ratio"));
        }
        let unclipped = rho * adv;
        let clipped = rho.clamp(1.0 - clip, 1.0 + clip) * adv;
        if unclipped <= clipped {
            // d(rho A)/d log pi = rho A
            Ok((unclipped, unclipped))
        } else {
            Ok((clipped, 0.0))
        }
    })
}

/// `epochs` full-batch ascent steps on the clipped surrogate. Returns the
/// objective at the first evaluation, before any step.
pub fn ppo_actor_update(
    actor: &mut MlpParams,
    opt: &mut AdamState,
    batch: &ActorBatch,
    clip: f64,
    epochs: usize,
    lr: f64,
) -> Result<f64, MarlError> {
    let mut first = None;
    for _ in 0..epochs {
        let (objective, mut grads) = ppo_objective_and_grad(actor, batch, clip)?;
        first.get_or_insert(objective);
        grads.scale(-1.0);
        adam_step(actor, &grads, opt, lr)?;
    }
    first.ok_or_else(|| MarlError::Config("ppo epochs must be >= 1".into()))
}
