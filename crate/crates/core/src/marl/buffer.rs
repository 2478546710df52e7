use crate::env_sim::ActionMask;

use super::config::CriticMode;

/// One joint environment step as seen by every agent.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    /// Encoded local observation per agent.
    pub obs: Vec<Vec<f64>>,
    /// Concatenation of `obs` in agent order.
    pub joint: Vec<f64>,
    pub actions: Vec<usize>,
    /// Log-probability of each action under the behaviour policy.
    pub log_probs: Vec<f64>,
    pub masks: Vec<ActionMask>,
    pub reward: f64,
    pub next_obs: Vec<Vec<f64>>,
    pub next_joint: Vec<f64>,
    /// The episode ended with this step.
    pub done: bool,
}

impl Transition {
    pub fn critic_input(&self, agent: usize, mode: CriticMode) -> &[f64] {
        match mode {
            CriticMode::Centralized => &self.joint,
            CriticMode::Independent => &self.obs[agent],
        }
    }

    pub fn next_critic_input(&self, agent: usize, mode: CriticMode) -> &[f64] {
        match mode {
            CriticMode::Centralized => &self.next_joint,
            CriticMode::Independent => &self.next_obs[agent],
        }
    }
}

/// On-policy storage, emptied after every update.
#[derive(Debug, Clone, PartialEq)]
pub struct RolloutBuffer {
    transitions: Vec<Transition>,
    capacity: usize,
}

impl RolloutBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            transitions: Vec::with_capacity(capacity),
            capacity,
        }
    }

    pub fn push(&mut self, t: Transition) {
        debug_assert!(!self.is_full());
        self.transitions.push(t);
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_full(&self) -> bool {
        self.transitions.len() >= self.capacity
    }

    pub fn clear(&mut self) {
        self.transitions.clear();
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn rewards(&self) -> Vec<f64> {
        self.transitions.iter().map(|t| t.reward).collect()
    }

    pub fn dones(&self) -> Vec<bool> {
        self.transitions.iter().map(|t| t.done).collect()
    }
}
