//! Zones, adjacency and agent coverage of the defended network.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EnvError;

/// Network security zones. The discriminant is the stable serialization code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum ZoneId {
    Internet = 0,
    Contractor = 1,
    HqPublicAccess = 2,
    HqAdmin = 3,
    HqOffice = 4,
    RestrictedA = 5,
    OperationalA = 6,
    RestrictedB = 7,
    OperationalB = 8,
}

impl ZoneId {
    pub const COUNT: usize = 9;

    pub const ALL: [ZoneId; 9] = [
        ZoneId::Internet,
        ZoneId::Contractor,
        ZoneId::HqPublicAccess,
        ZoneId::HqAdmin,
        ZoneId::HqOffice,
        ZoneId::RestrictedA,
        ZoneId::OperationalA,
        ZoneId::RestrictedB,
        ZoneId::OperationalB,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<ZoneId> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ZoneId::Internet => "internet",
            ZoneId::Contractor => "contractor",
            ZoneId::HqPublicAccess => "hq_public_access",
            ZoneId::HqAdmin => "hq_admin",
            ZoneId::HqOffice => "hq_office",
            ZoneId::RestrictedA => "restricted_a",
            ZoneId::OperationalA => "operational_a",
            ZoneId::RestrictedB => "restricted_b",
            ZoneId::OperationalB => "operational_b",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl From<ZoneId> for u8 {
    fn from(z: ZoneId) -> u8 {
        z.code()
    }
}

impl TryFrom<u8> for ZoneId {
    type Error = String;

    fn try_from(code: u8) -> Result<Self, Self::Error> {
        ZoneId::from_code(code).ok_or_else(|| format!("zone code {code} out of range 0..9"))
    }
}

impl fmt::Display for ZoneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ZoneId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ZoneId::ALL
            .into_iter()
            .find(|z| z.name() == s)
            .ok_or_else(|| format!("unknown zone `{s}`"))
    }
}

/// Undirected zone pair stored with the lower code first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(ZoneId, ZoneId);

impl Edge {
    /// Returns `None` for self-loops.
    pub fn new(a: ZoneId, b: ZoneId) -> Option<Edge> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Edge(a, b)),
            std::cmp::Ordering::Greater => Some(Edge(b, a)),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn low(self) -> ZoneId {
        self.0
    }

    pub fn high(self) -> ZoneId {
        self.1
    }

    pub fn touches(self, z: ZoneId) -> bool {
        self.0 == z || self.1 == z
    }

    /// The endpoint that is not `z`, if `z` is an endpoint.
    pub fn other(self, z: ZoneId) -> Option<ZoneId> {
        if self.0 == z {
            Some(self.1)
        } else if self.1 == z {
            Some(self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Number of blue agents in the defended network.
pub const NUM_BLUE_AGENTS: usize = 5;

/// The fixed wiring of the four network segments through the internet.
pub const DEFAULT_EDGES: [(ZoneId, ZoneId); 9] = [
    (ZoneId::Internet, ZoneId::Contractor),
    (ZoneId::Internet, ZoneId::RestrictedA),
    (ZoneId::Internet, ZoneId::RestrictedB),
    (ZoneId::Internet, ZoneId::HqPublicAccess),
    (ZoneId::RestrictedA, ZoneId::OperationalA),
    (ZoneId::RestrictedB, ZoneId::OperationalB),
    (ZoneId::HqPublicAccess, ZoneId::HqAdmin),
    (ZoneId::HqAdmin, ZoneId::HqOffice),
    (ZoneId::HqPublicAccess, ZoneId::HqOffice),
];

/// Zones each blue agent defends, indexed by agent id.
pub fn default_coverage() -> Vec<Vec<ZoneId>> {
    vec![
        vec![ZoneId::RestrictedA],
        vec![ZoneId::OperationalA],
        vec![ZoneId::RestrictedB],
        vec![ZoneId::OperationalB],
        vec![ZoneId::HqPublicAccess, ZoneId::HqAdmin, ZoneId::HqOffice],
    ]
}

/// Static network layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkTopology {
    adjacency: BTreeSet<Edge>,
    hosts_per_zone: [usize; ZoneId::COUNT],
    agent_coverage: Vec<Vec<ZoneId>>,
    /// First global host index of each zone; hosts are laid out by zone code.
    zone_offsets: [usize; ZoneId::COUNT],
}

impl NetworkTopology {
    pub fn new(
        hosts_per_zone: [usize; ZoneId::COUNT],
        edges: &[(ZoneId, ZoneId)],
        agent_coverage: Vec<Vec<ZoneId>>,
    ) -> Result<Self, EnvError> {
        let mut adjacency = BTreeSet::new();
        for &(a, b) in edges {
            let e = Edge::new(a, b).ok_or(EnvError::SelfLoop(a))?;
            adjacency.insert(e);
        }
        let mut agent_coverage = agent_coverage;
        for zones in &mut agent_coverage {
            zones.sort();
            zones.dedup();
            for &z in zones.iter() {
                if hosts_per_zone[z.index()] == 0 {
                    return Err(EnvError::EmptyDefendedZone(z));
                }
            }
        }
        let mut zone_offsets = [0; ZoneId::COUNT];
        let mut acc = 0;
        for z in ZoneId::ALL {
            zone_offsets[z.index()] = acc;
            acc += hosts_per_zone[z.index()];
        }
        Ok(Self {
            adjacency,
            hosts_per_zone,
            agent_coverage,
            zone_offsets,
        })
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_adjacent(&self, a: ZoneId, b: ZoneId) -> bool {
        Edge::new(a, b).is_some_and(|e| self.adjacency.contains(&e))
    }

    /// Neighbours of `z`, ordered by zone code.
    pub fn neighbors(&self, z: ZoneId) -> Vec<ZoneId> {
        let mut out: Vec<ZoneId> = self.adjacency.iter().filter_map(|e| e.other(z)).collect();
        out.sort();
        out
    }

    pub fn hosts_in(&self, z: ZoneId) -> usize {
        self.hosts_per_zone[z.index()]
    }

    pub fn total_hosts(&self) -> usize {
        self.hosts_per_zone.iter().sum()
    }

    /// Global host index of the `ordinal`-th host of zone `z`.
    pub fn host_index(&self, z: ZoneId, ordinal: usize) -> usize {
        debug_assert!(ordinal < self.hosts_in(z));
        self.zone_offsets[z.index()] + ordinal
    }

    pub fn zone_host_range(&self, z: ZoneId) -> std::ops::Range<usize> {
        let start = self.zone_offsets[z.index()];
        start..start + self.hosts_in(z)
    }

    pub fn num_agents(&self) -> usize {
        self.agent_coverage.len()
    }

    pub fn coverage(&self, agent: usize) -> &[ZoneId] {
        &self.agent_coverage[agent]
    }

    /// Agent defending zone `z`, if any.
    pub fn defender_of(&self, z: ZoneId) -> Option<usize> {
        self.agent_coverage.iter().position(|zs| zs.contains(&z))
    }

    /// Zones covered by some agent, ordered by zone code.
    pub fn defended_zones(&self) -> Vec<ZoneId> {
        let mut zs: Vec<ZoneId> = self.agent_coverage.iter().flatten().copied().collect();
        zs.sort();
        zs.dedup();
        zs
    }

    /// Global indices of the hosts an agent covers, ordered by (zone code, ordinal).
    pub fn covered_hosts(&self, agent: usize) -> Vec<usize> {
        self.coverage(agent)
            .iter()
            .flat_map(|&z| self.zone_host_range(z))
            .collect()
    }

    /// Adjacency edges touching any zone the agent covers, ordered by (low, high).
    pub fn incident_edges(&self, agent: usize) -> Vec<Edge> {
        let zones = self.coverage(agent);
        self.adjacency
            .iter()
            .copied()
            .filter(|e| zones.iter().any(|&z| e.touches(z)))
            .collect()
    }

    /// Flat action-space size: Monitor, four host actions per covered host,
    /// Block/Allow per incident edge.
    pub fn action_space_size(&self, agent: usize) -> usize {
        1 + 4 * self.covered_hosts(agent).len() + 2 * self.incident_edges(agent).len()
    }
}

/// Builds the four-segment topology from per-zone host counts.
pub fn build_topology(hosts_per_zone: [usize; ZoneId::COUNT]) -> Result<NetworkTopology, EnvError> {
    NetworkTopology::new(hosts_per_zone, &DEFAULT_EDGES, default_coverage())
}
