//! Episode reset and the fixed-order transition function.
//!
//! One RNG stream per episode, consumed in this order each step:
//! red draws by zone code, green draws by (zone code, green ordinal),
//! then one alert draw per host by global host index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::action::{ActionLayout, ActionMask, BlueAction};
use super::config::EnvConfig;
use super::observation::{encode_observation, ObservationVector};
use super::reward::{compute_shared_reward, PenaltyEvent, PenaltyKind};
use super::state::{EpisodeState, Suspicion};
use super::topology::{NetworkTopology, ZoneId};
use super::EnvError;

pub(crate) fn unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}

pub(crate) fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub observations: Vec<ObservationVector>,
    pub reward: f64,
    pub done: bool,
    pub events: Vec<PenaltyEvent>,
}

/// Immutable environment definition shared by all episodes.
#[derive(Debug, Clone)]
pub struct Environment {
    config: EnvConfig,
    topology: NetworkTopology,
    layouts: Vec<ActionLayout>,
    defended_zones: Vec<ZoneId>,
}

impl Environment {
    pub fn new(config: EnvConfig) -> Result<Self, EnvError> {
        config.validate()?;
        let topology = config.topology()?;
        let layouts = config.agents.iter().map(|&a| ActionLayout::new(&topology, a)).collect();
        let defended_zones = topology.defended_zones();
        Ok(Self {
            config,
            topology,
            layouts,
            defended_zones,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    /// Number of acting blue agents.
    pub fn num_agents(&self) -> usize {
        self.layouts.len()
    }

    /// Blue-agent id of the `slot`-th acting agent.
    pub fn agent_id(&self, slot: usize) -> usize {
        self.config.agents[slot]
    }

    pub fn layout(&self, slot: usize) -> &ActionLayout {
        &self.layouts[slot]
    }

    pub fn action_dim(&self, slot: usize) -> usize {
        self.layouts[slot].size()
    }

    pub fn obs_dim(&self, slot: usize) -> usize {
        super::observation::encoded_len(self.layouts[slot].hosts.len(), self.layouts[slot].edges.len())
    }

    pub fn reset(&self, seed: u64) -> (EpisodeState, Vec<ObservationVector>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let foothold = pick(&mut rng, self.topology.hosts_in(ZoneId::Contractor));
        let mut state = EpisodeState::fresh(&self.topology, self.config.max_steps, rng);
        let h = self.topology.host_index(ZoneId::Contractor, foothold);
        state.hosts[h].compromise();
        state.red_zones.insert(ZoneId::Contractor);
        let obs = self.observations(&state);
        (state, obs)
    }

    pub fn observations(&self, state: &EpisodeState) -> Vec<ObservationVector> {
        (0..self.num_agents())
            .map(|slot| self.encode_observation(state, slot))
            .collect()
    }

    pub fn encode_observation(&self, state: &EpisodeState, slot: usize) -> ObservationVector {
        encode_observation(state, &self.layouts[slot], self.agent_id(slot))
    }

    pub fn legal_action_mask(&self, state: &EpisodeState, slot: usize) -> ActionMask {
        self.layouts[slot].mask(state)
    }

    pub fn masks(&self, state: &EpisodeState) -> Vec<ActionMask> {
        (0..self.num_agents())
            .map(|slot| self.legal_action_mask(state, slot))
            .collect()
    }

    /// Advances one step with one flat action index per acting agent.
    pub fn step(&self, state: &mut EpisodeState, actions: &[usize]) -> Result<StepOutcome, EnvError> {
        if state.done {
            return Err(EnvError::EpisodeDone);
        }
        if actions.len() != self.num_agents() {
            return Err(EnvError::WrongActionCount {
                expected: self.num_agents(),
                got: actions.len(),
            });
        }
        let mut decoded = Vec::with_capacity(actions.len());
        for (slot, &index) in actions.iter().enumerate() {
            let agent = self.agent_id(slot);
            if !self.legal_action_mask(state, slot).allows(index) {
                return Err(EnvError::IllegalAction { agent, index });
            }
            // legal indices always decode
            decoded.push(self.layouts[slot].decode(index).expect("masked index decodes"));
        }

        for host in &mut state.hosts {
            host.restored_this_step = false;
        }
        for action in decoded {
            self.apply_blue(state, action);
        }
        let mut events = Vec::new();
        self.red_phase(state, &mut events);
        self.green_phase(state, &mut events);
        self.monitor_phase(state);

        let reward = compute_shared_reward(&self.config.reward_table, &events);
        state.step += 1;
        state.done = state.step >= state.max_steps;
        Ok(StepOutcome {
            observations: self.observations(state),
            reward,
            done: state.done,
            events,
        })
    }

    /// Applies one agent's action in isolation: no red, green or monitor
    /// phase and no step advance.
    pub fn apply_action(&self, state: &mut EpisodeState, slot: usize, index: usize) -> Result<BlueAction, EnvError> {
        let agent = self.agent_id(slot);
        if !self.legal_action_mask(state, slot).allows(index) {
            return Err(EnvError::IllegalAction { agent, index });
        }
        let action = self.layouts[slot]
            .decode(index)
            .ok_or(EnvError::IllegalAction { agent, index })?;
        self.apply_blue(state, action);
        Ok(action)
    }

    fn apply_blue(&self, state: &mut EpisodeState, action: BlueAction) {
        match action {
            BlueAction::Monitor => {}
            BlueAction::Analyze(h) => {
                let host = &mut state.hosts[h];
                if host.compromised {
                    host.confirm();
                } else {
                    host.clear_suspicion();
                }
            }
            BlueAction::DeployDecoy(h) => state.hosts[h].decoy = true,
            BlueAction::Remove(h) => {
                let host = &mut state.hosts[h];
                if !host.compromised {
                    host.clear_suspicion();
                } else if host.entrenched_steps < self.config.remove_entrenchment_limit {
                    host.clean_up();
                    self.evict_if_clean(state, h);
                }
            }
            BlueAction::Restore(h) => {
                let host = &mut state.hosts[h];
                host.clean_up();
                host.restored_this_step = true;
                self.evict_if_clean(state, h);
            }
            BlueAction::BlockTraffic(e) => {
                state.blocked_edges.insert(e);
            }
            BlueAction::AllowTraffic(e) => {
                state.blocked_edges.remove(&e);
            }
        }
    }

    /// Drops the red presence of a zone once none of its hosts is compromised.
    fn evict_if_clean(&self, state: &mut EpisodeState, h: usize) {
        let zone = state.hosts[h].zone;
        if zone != ZoneId::Contractor && !state.zone_compromised(&self.topology, zone) {
            state.red_zones.remove(&zone);
        }
    }

    fn red_phase(&self, state: &mut EpisodeState, events: &mut Vec<PenaltyEvent>) {
        let acting: Vec<ZoneId> = state.red_zones.iter().copied().collect();
        for zone in acting {
            self.red_zone_step(state, zone, events);
        }
        for host in &mut state.hosts {
            if host.compromised {
                host.entrenched_steps += 1;
            }
        }
    }

    /// One red presence: lateral move, in-zone spread, or impact.
    fn red_zone_step(&self, state: &mut EpisodeState, zone: ZoneId, events: &mut Vec<PenaltyEvent>) {
        let cfg = &self.config;
        let topo = &self.topology;
        let u = unit(&mut state.rng);
        if u < cfg.red_move_prob {
            let neighbors = topo.neighbors(zone);
            if neighbors.is_empty() {
                return;
            }
            let target = neighbors[pick(&mut state.rng, neighbors.len())];
            if state.red_zones.contains(&target) || state.is_blocked(zone, target) {
                return;
            }
            let n = topo.hosts_in(target);
            if n == 0 {
                state.red_zones.insert(target);
                return;
            }
            let h = topo.host_index(target, pick(&mut state.rng, n));
            if state.hosts[h].decoy {
                state.hosts[h].confirm();
            } else {
                state.hosts[h].compromise();
                state.red_zones.insert(target);
            }
        } else if u < cfg.red_move_prob + cfg.red_spread_prob {
            let clean: Vec<usize> = topo
                .zone_host_range(zone)
                .filter(|&h| !state.hosts[h].compromised)
                .collect();
            if clean.is_empty() {
                return;
            }
            let h = clean[pick(&mut state.rng, clean.len())];
            state.hosts[h].compromise();
        } else if state.zone_compromised(topo, zone) {
            events.push(PenaltyEvent {
                zone,
                kind: PenaltyKind::RedImpactOrAccess,
                step: state.step,
            });
        }
    }

    fn green_phase(&self, state: &mut EpisodeState, events: &mut Vec<PenaltyEvent>) {
        for &zone in &self.defended_zones {
            for _ in 0..self.config.greens_per_zone {
                self.green_step(state, zone, events);
            }
        }
    }

    /// One green user of `zone`: local work or a remote service access, then
    /// the phishing draw.
    fn green_step(&self, state: &mut EpisodeState, zone: ZoneId, events: &mut Vec<PenaltyEvent>) {
        let cfg = &self.config;
        let topo = &self.topology;
        let n_home = topo.hosts_in(zone);
        let u = unit(&mut state.rng);
        if u < cfg.green_local_work_prob {
            let h = topo.host_index(zone, pick(&mut state.rng, n_home));
            let host = &state.hosts[h];
            if host.compromised || host.restored_this_step {
                events.push(PenaltyEvent {
                    zone,
                    kind: PenaltyKind::LocalWorkFail,
                    step: state.step,
                });
            }
        } else {
            let reachable: Vec<ZoneId> = topo
                .neighbors(zone)
                .into_iter()
                .filter(|&n| !state.is_blocked(zone, n))
                .collect();
            if reachable.is_empty() {
                events.push(PenaltyEvent {
                    zone,
                    kind: PenaltyKind::AccessServiceFail,
                    step: state.step,
                });
            } else {
                let target = reachable[pick(&mut state.rng, reachable.len())];
                let n_target = topo.hosts_in(target);
                if n_target > 0 {
                    let h = topo.host_index(target, pick(&mut state.rng, n_target));
                    if state.hosts[h].compromised {
                        events.push(PenaltyEvent {
                            zone: target,
                            kind: PenaltyKind::RedImpactOrAccess,
                            step: state.step,
                        });
                    }
                }
            }
        }
        let v = unit(&mut state.rng);
        if v < cfg.phishing_prob && !state.red_zones.contains(&zone) {
            let h = topo.host_index(zone, pick(&mut state.rng, n_home));
            state.hosts[h].compromise();
            state.red_zones.insert(zone);
        }
    }

    fn monitor_phase(&self, state: &mut EpisodeState) {
        let cfg = &self.config;
        for i in 0..state.hosts.len() {
            let u = unit(&mut state.rng);
            let host = &mut state.hosts[i];
            if host.suspicion != Suspicion::None {
                continue;
            }
            let p = if host.compromised {
                cfg.alert_prob
            } else {
                cfg.false_alarm_prob
            };
            if u < p {
                host.suspicion = Suspicion::Suspicious;
            }
        }
    }
}
