//! JSON-lines step records: `{"step":..,"events":[{"zone":..,"kind":..}],"reward":..}`.

use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use super::reward::{PenaltyEvent, PenaltyKind};
use super::topology::ZoneId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEntry {
    pub zone: ZoneId,
    pub kind: PenaltyKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: u32,
    pub events: Vec<EventEntry>,
    pub reward: f64,
}

impl StepRecord {
    /// `step` is the 0-based index of the step that produced the events.
    pub fn new(step: u32, events: &[PenaltyEvent], reward: f64) -> Self {
        Self {
            step,
            events: events
                .iter()
                .map(|e| EventEntry {
                    zone: e.zone,
                    kind: e.kind,
                })
                .collect(),
            reward,
        }
    }
}

pub fn write_record<W: Write>(out: &mut W, record: &StepRecord) -> io::Result<()> {
    serde_json::to_writer(&mut *out, record)?;
    out.write_all(b"\n")
}

pub fn read_records<R: BufRead>(input: R) -> io::Result<Vec<StepRecord>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}
