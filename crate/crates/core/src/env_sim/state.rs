use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::topology::{Edge, NetworkTopology, ZoneId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Suspicion {
    None = 0,
    Suspicious = 1,
    Confirmed = 2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HostState {
    pub zone: ZoneId,
    pub index: usize,
    pub compromised: bool,
    /// Consecutive steps spent compromised.
    pub entrenched_steps: u32,
    pub decoy: bool,
    pub suspicion: Suspicion,
    /// Set by an Analyze hit or a decoy trip; required for `Confirmed`.
    pub confirmed_evidence: bool,
    pub restored_this_step: bool,
}

impl HostState {
    pub fn clean(zone: ZoneId, index: usize) -> Self {
        Self {
            zone,
            index,
            compromised: false,
            entrenched_steps: 0,
            decoy: false,
            suspicion: Suspicion::None,
            confirmed_evidence: false,
            restored_this_step: false,
        }
    }

    pub(crate) fn compromise(&mut self) {
        self.compromised = true;
    }

    pub(crate) fn confirm(&mut self) {
        self.suspicion = Suspicion::Confirmed;
        self.confirmed_evidence = true;
    }

    pub(crate) fn clear_suspicion(&mut self) {
        self.suspicion = Suspicion::None;
        self.confirmed_evidence = false;
    }

    pub(crate) fn clean_up(&mut self) {
        self.compromised = false;
        self.entrenched_steps = 0;
        self.clear_suspicion();
    }
}

/// Ground-truth world state of one episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeState {
    pub hosts: Vec<HostState>,
    pub red_zones: BTreeSet<ZoneId>,
    pub blocked_edges: BTreeSet<Edge>,
    pub step: u32,
    pub max_steps: u32,
    pub done: bool,
    pub(crate) rng: ChaCha8Rng,
}

impl EpisodeState {
    pub(crate) fn fresh(topology: &NetworkTopology, max_steps: u32, rng: ChaCha8Rng) -> Self {
        let hosts = ZoneId::ALL
            .into_iter()
            .flat_map(|z| (0..topology.hosts_in(z)).map(move |i| HostState::clean(z, i)))
            .collect();
        Self {
            hosts,
            red_zones: BTreeSet::new(),
            blocked_edges: BTreeSet::new(),
            step: 0,
            max_steps,
            done: false,
            rng,
        }
    }

    pub fn rng(&self) -> &ChaCha8Rng {
        &self.rng
    }

    pub fn is_blocked(&self, a: ZoneId, b: ZoneId) -> bool {
        Edge::new(a, b).is_some_and(|e| self.blocked_edges.contains(&e))
    }

    pub fn zone_hosts<'a>(&'a self, topology: &NetworkTopology, z: ZoneId) -> &'a [HostState] {
        &self.hosts[topology.zone_host_range(z)]
    }

    pub fn zone_compromised(&self, topology: &NetworkTopology, z: ZoneId) -> bool {
        self.zone_hosts(topology, z).iter().any(|h| h.compromised)
    }
}
