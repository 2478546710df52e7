//! Team penalty table and the shared reward.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::topology::ZoneId;

/// What went wrong in a zone during a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PenaltyKind {
    LocalWorkFail,
    AccessServiceFail,
    RedImpactOrAccess,
}

impl PenaltyKind {
    pub const ALL: [PenaltyKind; 3] = [
        PenaltyKind::LocalWorkFail,
        PenaltyKind::AccessServiceFail,
        PenaltyKind::RedImpactOrAccess,
    ];

    fn column(self) -> usize {
        match self {
            PenaltyKind::LocalWorkFail => 0,
            PenaltyKind::AccessServiceFail => 1,
            PenaltyKind::RedImpactOrAccess => 2,
        }
    }
}

impl fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PenaltyEvent {
    pub zone: ZoneId,
    pub kind: PenaltyKind,
    pub step: u32,
}

/// Row of the reward table. The three HQ zones share one row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RewardCategory {
    Hq,
    Contractor,
    RestrictedA,
    OperationalA,
    RestrictedB,
    OperationalB,
    Internet,
}

impl RewardCategory {
    pub const ALL: [RewardCategory; 7] = [
        RewardCategory::Hq,
        RewardCategory::Contractor,
        RewardCategory::RestrictedA,
        RewardCategory::OperationalA,
        RewardCategory::RestrictedB,
        RewardCategory::OperationalB,
        RewardCategory::Internet,
    ];

    pub fn of(zone: ZoneId) -> RewardCategory {
        match zone {
            ZoneId::HqPublicAccess | ZoneId::HqAdmin | ZoneId::HqOffice => RewardCategory::Hq,
            ZoneId::Contractor => RewardCategory::Contractor,
            ZoneId::RestrictedA => RewardCategory::RestrictedA,
            ZoneId::OperationalA => RewardCategory::OperationalA,
            ZoneId::RestrictedB => RewardCategory::RestrictedB,
            ZoneId::OperationalB => RewardCategory::OperationalB,
            ZoneId::Internet => RewardCategory::Internet,
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            RewardCategory::Hq => "hq",
            RewardCategory::Contractor => "contractor",
            RewardCategory::RestrictedA => "restricted_a",
            RewardCategory::OperationalA => "operational_a",
            RewardCategory::RestrictedB => "restricted_b",
            RewardCategory::OperationalB => "operational_b",
            RewardCategory::Internet => "internet",
        }
    }

    fn row(self) -> usize {
        self as usize
    }
}

/// Penalties per category: (local work fails, access service fails, red impact/access).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RewardTable {
    rows: [[f64; 3]; 7],
}

impl Default for RewardTable {
    fn default() -> Self {
        Self {
            rows: [
                [-1.0, -1.0, -3.0], // HQ
                [0.0, -5.0, -5.0],  // Contractor
                [-1.0, -3.0, -1.0], // Restricted A
                [-1.0, -1.0, -1.0], // Operational A
                [-1.0, -3.0, -1.0], // Restricted B
                [-1.0, -1.0, -1.0], // Operational B
                [0.0, 0.0, 0.0],    // Internet
            ],
        }
    }
}

impl RewardTable {
    pub fn zeros() -> Self {
        Self { rows: [[0.0; 3]; 7] }
    }

    pub fn penalty(&self, category: RewardCategory, kind: PenaltyKind) -> f64 {
        self.rows[category.row()][kind.column()]
    }

    pub fn row(&self, category: RewardCategory) -> [f64; 3] {
        self.rows[category.row()]
    }

    /// Replaces one row. Entries must be finite and non-positive.
    pub fn set_row(&mut self, category: RewardCategory, row: [f64; 3]) -> Result<(), String> {
        if let Some(bad) = row.iter().find(|v| !v.is_finite() || **v > 0.0) {
            return Err(format!("penalty {bad} must be finite and <= 0"));
        }
        self.rows[category.row()] = row;
        Ok(())
    }

    pub fn event_penalty(&self, event: &PenaltyEvent) -> f64 {
        self.penalty(RewardCategory::of(event.zone), event.kind)
    }
}

/// Sum of table penalties over the events of one step.
pub fn compute_shared_reward(table: &RewardTable, events: &[PenaltyEvent]) -> f64 {
    events.iter().map(|e| table.event_penalty(e)).sum()
}
