//! Blue actions, their flat per-agent indexing, and legality masks.
//!
//! Layout of an agent's flat action space:
//! `0` is Monitor; for the k-th covered host, `1 + 4k + {0: Analyze,
//! 1: DeployDecoy, 2: Remove, 3: Restore}`; for the e-th incident edge,
//! `1 + 4H + 2e + {0: BlockTraffic, 1: AllowTraffic}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::state::{EpisodeState, Suspicion};
use super::topology::{Edge, NetworkTopology};

/// `host` is the global host index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlueAction {
    Monitor,
    Analyze(usize),
    DeployDecoy(usize),
    Remove(usize),
    Restore(usize),
    BlockTraffic(Edge),
    AllowTraffic(Edge),
}

impl fmt::Display for BlueAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlueAction::Monitor => write!(f, "Monitor"),
            BlueAction::Analyze(h) => write!(f, "Analyze(host {h})"),
            BlueAction::DeployDecoy(h) => write!(f, "DeployDecoy(host {h})"),
            BlueAction::Remove(h) => write!(f, "Remove(host {h})"),
            BlueAction::Restore(h) => write!(f, "Restore(host {h})"),
            BlueAction::BlockTraffic(e) => write!(f, "BlockTraffic({e})"),
            BlueAction::AllowTraffic(e) => write!(f, "AllowTraffic({e})"),
        }
    }
}

/// Precomputed action layout of one agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionLayout {
    pub hosts: Vec<usize>,
    pub edges: Vec<Edge>,
}

impl ActionLayout {
    pub fn new(topology: &NetworkTopology, agent: usize) -> Self {
        Self {
            hosts: topology.covered_hosts(agent),
            edges: topology.incident_edges(agent),
        }
    }

    pub fn size(&self) -> usize {
        1 + 4 * self.hosts.len() + 2 * self.edges.len()
    }

    pub fn decode(&self, index: usize) -> Option<BlueAction> {
        if index == 0 {
            return Some(BlueAction::Monitor);
        }
        let i = index - 1;
        if i < 4 * self.hosts.len() {
            let h = self.hosts[i / 4];
            return Some(match i % 4 {
                0 => BlueAction::Analyze(h),
                1 => BlueAction::DeployDecoy(h),
                2 => BlueAction::Remove(h),
                _ => BlueAction::Restore(h),
            });
        }
        let j = i - 4 * self.hosts.len();
        let e = *self.edges.get(j / 2)?;
        Some(if j.is_multiple_of(2) {
            BlueAction::BlockTraffic(e)
        } else {
            BlueAction::AllowTraffic(e)
        })
    }

    pub fn encode(&self, action: BlueAction) -> Option<usize> {
        let host_slot = |h: usize, k: usize| self.hosts.iter().position(|&x| x == h).map(|p| 1 + 4 * p + k);
        let edge_slot = |e: Edge, k: usize| {
            self.edges
                .iter()
                .position(|&x| x == e)
                .map(|p| 1 + 4 * self.hosts.len() + 2 * p + k)
        };
        match action {
            BlueAction::Monitor => Some(0),
            BlueAction::Analyze(h) => host_slot(h, 0),
            BlueAction::DeployDecoy(h) => host_slot(h, 1),
            BlueAction::Remove(h) => host_slot(h, 2),
            BlueAction::Restore(h) => host_slot(h, 3),
            BlueAction::BlockTraffic(e) => edge_slot(e, 0),
            BlueAction::AllowTraffic(e) => edge_slot(e, 1),
        }
    }

    pub fn mask(&self, state: &EpisodeState) -> ActionMask {
        let mut m = Vec::with_capacity(self.size());
        m.push(true);
        for &h in &self.hosts {
            let host = &state.hosts[h];
            let suspected = host.suspicion != Suspicion::None;
            m.push(suspected);
            m.push(!host.decoy);
            m.push(suspected);
            m.push(host.suspicion == Suspicion::Confirmed);
        }
        for e in &self.edges {
            let blocked = state.blocked_edges.contains(e);
            m.push(!blocked);
            m.push(blocked);
        }
        ActionMask(m)
    }
}

/// Legality of each flat action index. Monitor is always legal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionMask(pub Vec<bool>);

impl ActionMask {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn allows(&self, index: usize) -> bool {
        self.0.get(index).copied().unwrap_or(false)
    }

    pub fn legal_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}
