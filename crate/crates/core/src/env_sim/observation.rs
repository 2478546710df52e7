//! Per-agent local observations: MultiDiscrete slots and their one-hot encoding.

use serde::{Deserialize, Serialize};

use super::action::ActionLayout;
use super::state::EpisodeState;

pub const SUSPICION_CARDINALITY: u8 = 3;
pub const DECOY_CARDINALITY: u8 = 2;
pub const BLOCKED_CARDINALITY: u8 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationVector {
    pub agent_id: usize,
    pub multidiscrete: Vec<u8>,
    pub cardinalities: Vec<u8>,
    pub encoded: Vec<f64>,
}

/// Length of the one-hot encoding for `hosts` covered hosts and `edges` incident edges.
pub fn encoded_len(hosts: usize, edges: usize) -> usize {
    hosts * (SUSPICION_CARDINALITY + DECOY_CARDINALITY) as usize + edges * BLOCKED_CARDINALITY as usize
}

pub fn one_hot(slots: &[u8], cardinalities: &[u8]) -> Vec<f64> {
    let total: usize = cardinalities.iter().map(|&c| c as usize).sum();
    let mut out = vec![0.0; total];
    let mut offset = 0;
    for (&v, &c) in slots.iter().zip(cardinalities) {
        debug_assert!(v < c);
        out[offset + v as usize] = 1.0;
        offset += c as usize;
    }
    out
}

/// Reads only the hosts and edges in the agent's own layout.
pub fn encode_observation(state: &EpisodeState, layout: &ActionLayout, agent_id: usize) -> ObservationVector {
    let mut multidiscrete = Vec::with_capacity(2 * layout.hosts.len() + layout.edges.len());
    let mut cardinalities = Vec::with_capacity(multidiscrete.capacity());
    for &h in &layout.hosts {
        let host = &state.hosts[h];
        multidiscrete.push(host.suspicion as u8);
        cardinalities.push(SUSPICION_CARDINALITY);
        multidiscrete.push(host.decoy as u8);
        cardinalities.push(DECOY_CARDINALITY);
    }
    for e in &layout.edges {
        multidiscrete.push(state.blocked_edges.contains(e) as u8);
        cardinalities.push(BLOCKED_CARDINALITY);
    }
    let encoded = one_hot(&multidiscrete, &cardinalities);
    ObservationVector {
        agent_id,
        multidiscrete,
        cardinalities,
        encoded,
    }
}
