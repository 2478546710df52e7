//! Bootstrapped targets, discounted returns, and advantages.

use super::agent::AgentSpec;
use super::buffer::RolloutBuffer;
use super::config::{AdvantageMode, CriticMode};
use super::MarlError;

/// Critic regression targets, value estimates and `target - value`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageBatch {
    pub targets: Vec<f64>,
    pub values: Vec<f64>,
    pub advantages: Vec<f64>,
}

/// `r + gamma * V(x')` per transition; terminal transitions use `V(x') = 0`.
pub fn td_targets(
    buffer: &RolloutBuffer,
    agent: &AgentSpec,
    slot: usize,
    mode: CriticMode,
    gamma: f64,
) -> Result<Vec<f64>, MarlError> {
    if buffer.is_empty() {
        return Err(MarlError::EmptyBuffer);
    }
    buffer
        .transitions()
        .iter()
        .map(|t| {
            let next = if t.done {
                0.0
            } else {
                agent.value(t.next_critic_input(slot, mode))?
            };
            Ok(t.reward + gamma * next)
        })
        .collect()
}

/// Returns-to-go `G_t = r_t + gamma G_{t+1}`, restarting after each `done`.
/// If the last step is not terminal the tail is seeded with `bootstrap`.
pub fn discounted_returns(rewards: &[f64], dones: &[bool], gamma: f64, bootstrap: f64) -> Vec<f64> {
    assert_eq!(rewards.len(), dones.len(), "rewards and dones must align");
    let mut out = vec![0.0; rewards.len()];
    let mut running = bootstrap;
    for t in (0..rewards.len()).rev() {
        if dones[t] {
            running = 0.0;
        }
        running = rewards[t] + gamma * running;
        out[t] = running;
    }
    out
}

/// Advantages of one agent under its current critic.
pub fn compute_advantages(
    buffer: &RolloutBuffer,
    agent: &AgentSpec,
    slot: usize,
    mode: CriticMode,
    advantage_mode: AdvantageMode,
    gamma: f64,
    normalize: bool,
) -> Result<AdvantageBatch, MarlError> {
    if buffer.is_empty() {
        return Err(MarlError::EmptyBuffer);
    }
    let values = buffer
        .transitions()
        .iter()
        .map(|t| agent.value(t.critic_input(slot, mode)))
        .collect::<Result<Vec<_>, _>>()?;
    let targets = match advantage_mode {
        AdvantageMode::Td => td_targets(buffer, agent, slot, mode, gamma)?,
        AdvantageMode::EmpiricalReturn => {
            let last = &buffer.transitions()[buffer.len() - 1];
            let bootstrap = if last.done {
                0.0
            } else {
                agent.value(last.next_critic_input(slot, mode))?
            };
            discounted_returns(&buffer.rewards(), &buffer.dones(), gamma, bootstrap)
        }
    };
    let mut advantages: Vec<f64> = targets.iter().zip(&values).map(|(y, v)| y - v).collect();
    if normalize {
        normalize_in_place(&mut advantages);
    }
    Ok(AdvantageBatch {
        targets,
        values,
        advantages,
    })
}

/// Zero mean, unit standard deviation (population), left centred if constant.
pub fn normalize_in_place(xs: &mut [f64]) {
    if xs.is_empty() {
        return;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let std = var.sqrt();
    for x in xs.iter_mut() {
        *x -= mean;
        if std > 1e-12 {
            *x /= std;
        }
    }
}
