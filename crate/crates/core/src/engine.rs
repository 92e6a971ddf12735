//! Fixed-step simulation loop.
//!
//! Every step reads the previous committed state (poses and last commanded
//! turn rates), lets each agent sense, switch and pick a control, then commits
//! all agents together with an explicit-Euler unicycle update. Agents own
//! their dwell-time ledger and random stream, so evaluation order does not
//! change results.

use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::metrics::{compute_metrics, MetricsSeries};
use crate::controllers::{
    cucker_smale_accel_with, motion_camouflage, pure_pursuit, unit_uniform, vicsek_heading,
    wfi_feedback, ControllerConfig, ControllerKind,
};
use crate::error::{check_nonnegative, check_positive, ConfigError};
use crate::flow::{flow_samples, peak, StmdOutput, DEFAULT_R_MIN};
use crate::geometry::{relative_geometry, wrap_angle, AgentState, SwarmState};
use crate::math::{self, PI};
use crate::supervisor::{min_average_dwell_time, DwellTimeConfig, DwellTimeLedger};

/// Initial poses.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum InitSpec {
    /// One `[x, y, theta]` per agent.
    Explicit { poses: Vec<[f64; 3]> },
    /// Uniform positions in a box and uniform headings, drawn from the run
    /// seed.
    Box {
        x: [f64; 2],
        y: [f64; 2],
        #[cfg_attr(feature = "serde", serde(default = "full_circle"))]
        heading: [f64; 2],
    },
    /// Row-major grid with a common heading; agent 0 is offset by
    /// `lead_offset`.
    Lattice {
        columns: usize,
        spacing: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        heading: f64,
        #[cfg_attr(feature = "serde", serde(default))]
        lead_offset: f64,
    },
}

#[cfg(feature = "serde")]
fn full_circle() -> [f64; 2] {
    [-PI, PI]
}

/// Which agents run the controller. The rest keep their heading (and, for
/// Cucker-Smale, their velocity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ReactiveSet {
    #[default]
    All,
    /// Only agent 0.
    First,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ScenarioConfig {
    pub n_agents: usize,
    /// Forward speed shared by all agents.
    pub v: f64,
    pub dt: f64,
    pub duration: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default = "default_r_min"))]
    pub r_min: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub reactive: ReactiveSet,
    pub controller: ControllerConfig,
    #[cfg_attr(feature = "serde", serde(default))]
    pub dwell: DwellTimeConfig,
    pub init: InitSpec,
}

#[cfg(feature = "serde")]
fn default_r_min() -> f64 {
    DEFAULT_R_MIN
}

impl ScenarioConfig {
    /// Twenty pure-pursuit agents at 10 cm/s with gain 0.1, dwell-time
    /// constants μ = 10, λ = 1, ε = 0.3, run for 50 s from random poses in a
    /// 2 m box.
    pub fn reference_preset(seed: u64) -> Self {
        Self {
            n_agents: 20,
            v: 0.1,
            dt: 0.01,
            duration: 50.0,
            seed,
            r_min: DEFAULT_R_MIN,
            reactive: ReactiveSet::All,
            controller: ControllerConfig::new(ControllerKind::StmrPurePursuit),
            dwell: DwellTimeConfig::default(),
            init: InitSpec::Box {
                x: [0.0, 2.0],
                y: [0.0, 2.0],
                heading: [-PI, PI],
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_agents < 2 {
            return Err(ConfigError::TooFewAgents(self.n_agents));
        }
        check_positive("v", self.v)?;
        check_positive("dt", self.dt)?;
        check_nonnegative("duration", self.duration)?;
        check_positive("r_min", self.r_min)?;
        if self.duration > 0.0 && self.duration < self.dt {
            return Err(ConfigError::DurationShorterThanStep {
                duration: self.duration,
                dt: self.dt,
            });
        }
        self.controller.validate()?;
        self.dwell.validate()?;
        match &self.init {
            InitSpec::Explicit { poses } => {
                if poses.len() != self.n_agents {
                    return Err(ConfigError::PoseCount {
                        expected: self.n_agents,
                        found: poses.len(),
                    });
                }
                if poses.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(ConfigError::NonFinite {
                        field: "init.poses",
                    });
                }
            }
            InitSpec::Box { x, y, heading } => {
                for (field, r) in [("init.x", x), ("init.y", y), ("init.heading", heading)] {
                    if !(r[0].is_finite() && r[1].is_finite()) {
                        return Err(ConfigError::NonFinite { field });
                    }
                    if r[0] > r[1] {
                        return Err(ConfigError::EmptyRange(field));
                    }
                }
            }
            InitSpec::Lattice {
                columns,
                spacing,
                heading,
                lead_offset,
            } => {
                if *columns == 0 {
                    return Err(ConfigError::NonPositive {
                        field: "init.columns",
                        value: 0.0,
                    });
                }
                check_positive("init.spacing", *spacing)?;
                if !(heading.is_finite() && lead_offset.is_finite()) {
                    return Err(ConfigError::NonFinite {
                        field: "init.heading",
                    });
                }
            }
        }
        Ok(())
    }

    /// `floor(duration / dt)`, tolerant of representation error in `dt`.
    pub fn step_count(&self) -> usize {
        math::floor(self.duration / self.dt + 1e-9) as usize
    }

    pub fn reactive_mask(&self) -> Vec<bool> {
        (0..self.n_agents)
            .map(|i| match self.reactive {
                ReactiveSet::All => true,
                ReactiveSet::First => i == 0,
            })
            .collect()
    }

    /// Initial swarm. Random draws come from stream 0 of the run seed.
    pub fn initial_state(&self) -> SwarmState {
        let n = self.n_agents;
        let agents = match &self.init {
            InitSpec::Explicit { poses } => poses
                .iter()
                .map(|p| AgentState::new(p[0], p[1], p[2], self.v))
                .collect(),
            InitSpec::Box { x, y, heading } => {
                let mut rng = agent_stream(self.seed, 0);
                let mut draw = |r: &[f64; 2]| r[0] + (r[1] - r[0]) * unit_uniform(&mut rng);
                (0..n)
                    .map(|_| {
                        let px = draw(x);
                        let py = draw(y);
                        let th = draw(heading);
                        AgentState::new(px, py, th, self.v)
                    })
                    .collect()
            }
            InitSpec::Lattice {
                columns,
                spacing,
                heading,
                lead_offset,
            } => (0..n)
                .map(|i| {
                    let col = (i % columns) as f64;
                    let row = (i / columns) as f64;
                    let th = if i == 0 {
                        heading + lead_offset
                    } else {
                        *heading
                    };
                    AgentState::new(col * spacing, row * spacing, th, self.v)
                })
                .collect(),
        };
        SwarmState::new(0.0, agents)
    }
}

/// Independent ChaCha stream `stream` of the run seed. Stream 0 seeds the
/// initial conditions; agent `i` uses stream `i + 1`.
pub fn agent_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A requested target change, accepted or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEvent {
    pub time: f64,
    pub agent: usize,
    pub old_target: usize,
    pub new_target: usize,
    pub accepted: bool,
}

/// All agents at one sample time, with what each agent sensed and tracked.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub agents: Vec<AgentState>,
    /// Continuous heading, accumulated from wrapped increments.
    pub unwrapped: Vec<f64>,
    pub targets: Vec<Option<usize>>,
    /// Sensed peak flow magnitude (STMR models only).
    pub peaks: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub dt: f64,
    pub snapshots: Vec<Snapshot>,
}

/// A step produced a non-finite state. Logs up to the last finite snapshot
/// are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericalFailure {
    pub step: usize,
    pub time: f64,
    pub agent: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub trajectory: TrajectoryLog,
    pub switches: Vec<SwitchEvent>,
    pub metrics: MetricsSeries,
    /// Accepted switch times per agent (STMR models; empty otherwise).
    pub switch_times: Vec<Vec<f64>>,
    pub failure: Option<NumericalFailure>,
}

impl RunOutput {
    pub fn accepted_switches(&self) -> usize {
        self.switch_times.iter().map(Vec::len).sum()
    }
}

/// Per-agent outcome of the decision phase.
#[derive(Debug, Clone, Copy)]
struct Decision {
    control: Control,
    target: Option<usize>,
    peak: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Control {
    TurnRate(f64),
    Heading(f64),
    Velocity(f64, f64),
}

/// Order in which agents are evaluated within a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalOrder {
    #[default]
    Forward,
    Reversed,
}

/// A running simulation.
pub struct Simulation {
    cfg: ScenarioConfig,
    min_dwell: f64,
    state: SwarmState,
    step_index: usize,
    ledgers: Vec<Option<DwellTimeLedger>>,
    rngs: Vec<ChaCha8Rng>,
    velocities: Vec<(f64, f64)>,
    unwrapped: Vec<f64>,
    reactive: Vec<bool>,
    order: Vec<usize>,
}

impl Simulation {
    pub fn new(cfg: ScenarioConfig) -> Result<Self, ConfigError> {
        Self::with_order(cfg, EvalOrder::Forward)
    }

    pub fn with_order(cfg: ScenarioConfig, order: EvalOrder) -> Result<Self, ConfigError> {
        cfg.validate()?;
        let min_dwell = min_average_dwell_time(&cfg.dwell)?;
        let state = cfg.initial_state();
        let n = cfg.n_agents;
        let mut idx: Vec<usize> = (0..n).collect();
        if order == EvalOrder::Reversed {
            idx.reverse();
        }
        Ok(Self {
            min_dwell,
            velocities: state.agents.iter().map(AgentState::velocity).collect(),
            unwrapped: state.agents.iter().map(|a| a.theta).collect(),
            ledgers: alloc::vec![None; n],
            rngs: (0..n)
                .map(|i| agent_stream(cfg.seed, i as u64 + 1))
                .collect(),
            reactive: cfg.reactive_mask(),
            order: idx,
            step_index: 0,
            state,
            cfg,
        })
    }

    pub fn state(&self) -> &SwarmState {
        &self.state
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.cfg
    }

    pub fn ledgers(&self) -> &[Option<DwellTimeLedger>] {
        &self.ledgers
    }

    pub fn min_dwell(&self) -> f64 {
        self.min_dwell
    }

    fn time_of(&self, k: usize) -> f64 {
        k as f64 * self.cfg.dt
    }

    /// Sense, switch and choose controls for every agent against the current
    /// committed state. Switch requests are skipped when `allow_switch` is
    /// false; the first call only acquires initial targets.
    fn decide(&mut self, allow_switch: bool, events: &mut Vec<SwitchEvent>) -> Vec<Decision> {
        let n = self.cfg.n_agents;
        let ctrl = &self.cfg.controller;
        let t = self.state.t;
        let mut out: Vec<Option<Decision>> = alloc::vec![None; n];
        let step_events_start = events.len();
        for &i in &self.order {
            let me = &self.state.agents[i];
            if !self.reactive[i] {
                let control = match ctrl.kind {
                    ControllerKind::CuckerSmale => {
                        let (vx, vy) = self.velocities[i];
                        Control::Velocity(vx, vy)
                    }
                    _ => Control::TurnRate(0.0),
                };
                out[i] = Some(Decision {
                    control,
                    target: None,
                    peak: None,
                });
                continue;
            }
            let decision = match ctrl.kind {
                ControllerKind::StmrPurePursuit | ControllerKind::StmrMotionCamouflage => {
                    let samples = flow_samples(&self.state, i, self.cfg.r_min);
                    let sensed = peak(&samples).expect("n >= 2");
                    let ledger = match &mut self.ledgers[i] {
                        Some(l) => {
                            if allow_switch && sensed.target_id != l.current_target {
                                let old = l.current_target;
                                let accepted = l.request_switch(
                                    &self.cfg.dwell,
                                    self.min_dwell,
                                    t,
                                    sensed.target_id,
                                );
                                events.push(SwitchEvent {
                                    time: t,
                                    agent: i,
                                    old_target: old,
                                    new_target: sensed.target_id,
                                    accepted,
                                });
                            }
                            l
                        }
                        slot @ None => slot.insert(DwellTimeLedger::new(sensed.target_id, 0.0)),
                    };
                    let target = ledger.current_target;
                    let other = &self.state.agents[target];
                    let omega = if ctrl.kind == ControllerKind::StmrPurePursuit {
                        let tracked = samples
                            .iter()
                            .find(|s| s.neighbor_id == target)
                            .expect("target is a neighbor");
                        let out = StmdOutput {
                            peak_magnitude: tracked.magnitude,
                            peak_azimuth: relative_geometry(me, other).gamma_a,
                            target_id: target,
                        };
                        pure_pursuit(&out, ctrl.gain_k, ctrl.omega_max)
                    } else {
                        motion_camouflage(me, other, ctrl.gain_k, self.cfg.r_min, ctrl.omega_max)
                    };
                    Decision {
                        control: Control::TurnRate(omega),
                        target: Some(target),
                        peak: Some(sensed.peak_magnitude),
                    }
                }
                ControllerKind::Vicsek => {
                    let h = vicsek_heading(
                        &self.state,
                        i,
                        ctrl.vicsek_radius,
                        ctrl.vicsek_noise_eta,
                        &mut self.rngs[i],
                    );
                    Decision {
                        control: Control::Heading(h),
                        target: None,
                        peak: None,
                    }
                }
                ControllerKind::CuckerSmale => {
                    let (ax, ay) = cucker_smale_accel_with(
                        &self.state,
                        &self.velocities,
                        i,
                        ctrl.cs_strength,
                        ctrl.cs_beta,
                    );
                    let (vx, vy) = self.velocities[i];
                    Decision {
                        control: Control::Velocity(vx + ax * self.cfg.dt, vy + ay * self.cfg.dt),
                        target: None,
                        peak: None,
                    }
                }
                ControllerKind::Wfi => {
                    let omega = wfi_feedback(
                        &self.state,
                        i,
                        ctrl.gain_k,
                        self.cfg.r_min,
                        ctrl.wfi_samples,
                        ctrl.omega_max,
                    );
                    Decision {
                        control: Control::TurnRate(omega),
                        target: None,
                        peak: None,
                    }
                }
            };
            out[i] = Some(decision);
        }
        events[step_events_start..].sort_by_key(|e| e.agent);
        out.into_iter()
            .map(|d| d.expect("every agent decided"))
            .collect()
    }

    fn snapshot(&self, decisions: &[Decision]) -> Snapshot {
        Snapshot {
            t: self.state.t,
            agents: self.state.agents.clone(),
            unwrapped: self.unwrapped.clone(),
            targets: decisions.iter().map(|d| d.target).collect(),
            peaks: decisions.iter().map(|d| d.peak).collect(),
        }
    }

    /// Applies all controls at once and advances time by `dt`.
    fn commit(&mut self, decisions: &[Decision]) -> Result<(), NumericalFailure> {
        let dt = self.cfg.dt;
        let next_step = self.step_index + 1;
        let t_next = self.time_of(next_step);
        for (i, d) in decisions.iter().enumerate() {
            let a = &mut self.state.agents[i];
            let theta_old = a.theta;
            match d.control {
                Control::TurnRate(omega) => {
                    a.x += a.v * math::cos(theta_old) * dt;
                    a.y += a.v * math::sin(theta_old) * dt;
                    a.omega = omega;
                    if omega.is_finite() {
                        a.theta = wrap_angle(theta_old + omega * dt);
                    }
                    self.unwrapped[i] += omega * dt;
                }
                Control::Heading(h) => {
                    a.x += a.v * math::cos(theta_old) * dt;
                    a.y += a.v * math::sin(theta_old) * dt;
                    let turn = wrap_angle(h - theta_old);
                    a.theta = h;
                    a.omega = turn / dt;
                    self.unwrapped[i] += turn;
                }
                Control::Velocity(vx, vy) => {
                    let (vx0, vy0) = self.velocities[i];
                    a.x += vx0 * dt;
                    a.y += vy0 * dt;
                    self.velocities[i] = (vx, vy);
                    a.v = math::hypot(vx, vy);
                    if vx.is_finite() && vy.is_finite() {
                        let h = wrap_angle(math::atan2(vy, vx));
                        let turn = wrap_angle(h - theta_old);
                        a.theta = h;
                        a.omega = turn / dt;
                        self.unwrapped[i] += turn;
                    } else {
                        a.theta = f64::NAN;
                    }
                }
            }
        }
        self.state.t = t_next;
        self.step_index = next_step;
        if let Some(agent) = self
            .state
            .agents
            .iter()
            .zip(&self.unwrapped)
            .position(|(a, u)| !a.is_finite() || !u.is_finite())
        {
            return Err(NumericalFailure {
                step: next_step,
                time: t_next,
                agent,
            });
        }
        Ok(())
    }

    /// One full step: decide against the committed state, then commit. Returns
    /// the snapshot of the state the decisions were made on.
    pub fn step(&mut self, events: &mut Vec<SwitchEvent>) -> Result<Snapshot, NumericalFailure> {
        let first = self.ledgers.iter().all(Option::is_none);
        let decisions = self.decide(!first, events);
        let snap = self.snapshot(&decisions);
        self.commit(&decisions)?;
        Ok(snap)
    }

    /// Snapshot of the current state without requesting any switches.
    pub fn observe(&mut self) -> Snapshot {
        let mut scratch = Vec::new();
        let decisions = self.decide(false, &mut scratch);
        self.snapshot(&decisions)
    }
}

/// Runs a scenario to completion.
pub fn run(cfg: &ScenarioConfig) -> Result<RunOutput, ConfigError> {
    run_with_order(cfg, EvalOrder::Forward)
}

pub fn run_with_order(cfg: &ScenarioConfig, order: EvalOrder) -> Result<RunOutput, ConfigError> {
    let mut sim = Simulation::with_order(cfg.clone(), order)?;
    let steps = cfg.step_count();
    let mut snapshots = Vec::with_capacity(steps + 1);
    let mut switches = Vec::new();
    let mut failure = None;
    for _ in 0..steps {
        match sim.step(&mut switches) {
            Ok(s) => snapshots.push(s),
            Err(f) => {
                failure = Some(f);
                break;
            }
        }
    }
    if failure.is_none() {
        snapshots.push(sim.observe());
    }
    let trajectory = TrajectoryLog {
        dt: cfg.dt,
        snapshots,
    };
    let metrics = compute_metrics(&cfg.controller, cfg.r_min, &sim.reactive, &trajectory);
    let switch_times = sim
        .ledgers
        .iter()
        .map(|l| {
            l.as_ref()
                .map(|l| l.switch_times.clone())
                .unwrap_or_default()
        })
        .collect();
    Ok(RunOutput {
        trajectory,
        switches,
        metrics,
        switch_times,
        failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    fn two_agent(kind: ControllerKind) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::reference_preset(3);
        cfg.n_agents = 2;
        cfg.duration = 1.0;
        cfg.controller = ControllerConfig::new(kind);
        cfg.init = InitSpec::Explicit {
            poses: vec![[0.0, 0.0, PI / 2.0], [5.0, 5.0, 0.0]],
        };
        cfg
    }

    #[test]
    fn displacement_is_speed_times_dt() {
        let mut sim = Simulation::new(ScenarioConfig::reference_preset(9)).unwrap();
        let mut ev = Vec::new();
        for _ in 0..20 {
            let before = sim.state().clone();
            sim.step(&mut ev).unwrap();
            for (a, b) in before.agents.iter().zip(&sim.state().agents) {
                let d = libm::hypot(b.x - a.x, b.y - a.y);
                assert!((d - 0.1 * 0.01).abs() <= 1e-12 * 0.001);
            }
        }
    }

    #[test]
    fn straight_line_without_control() {
        let mut cfg = two_agent(ControllerKind::StmrPurePursuit);
        cfg.reactive = ReactiveSet::First;
        let mut sim = Simulation::new(cfg).unwrap();
        let mut ev = Vec::new();
        let b0 = sim.state().agents[1];
        sim.step(&mut ev).unwrap();
        let b1 = sim.state().agents[1];
        assert_eq!(b1.theta, b0.theta);
        assert_abs_diff_eq!(b1.x - b0.x, 0.001, epsilon = 1e-15);
        assert_eq!(b1.y, b0.y);
    }

    #[test]
    fn quarter_turn_heading_moves_along_y() {
        let mut cfg = two_agent(ControllerKind::StmrPurePursuit);
        cfg.reactive = ReactiveSet::First;
        cfg.init = InitSpec::Explicit {
            poses: vec![[0.0, 0.0, 0.0], [0.0, 3.0, PI / 2.0]],
        };
        let mut sim = Simulation::new(cfg).unwrap();
        sim.step(&mut Vec::new()).unwrap();
        let b = sim.state().agents[1];
        assert_abs_diff_eq!(b.y - 3.0, 0.001, epsilon = 1e-15);
        assert_abs_diff_eq!(b.x, 0.0, epsilon = 1e-18);
    }

    #[test]
    fn empty_run_has_one_snapshot() {
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.duration = 0.0;
        let out = run(&cfg).unwrap();
        assert_eq!(out.trajectory.snapshots.len(), 1);
        assert!(out.switches.is_empty());
        assert_eq!(out.metrics.rows.len(), 1);
    }

    #[test]
    fn snapshot_count_matches_duration() {
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.duration = 0.5;
        let out = run(&cfg).unwrap();
        assert_eq!(out.trajectory.snapshots.len(), 51);
        assert_eq!(cfg.step_count(), 50);
        let preset = ScenarioConfig::reference_preset(0);
        assert_eq!(preset.step_count(), 5000);
    }

    #[test]
    fn config_errors() {
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.n_agents = 1;
        assert_eq!(cfg.validate(), Err(ConfigError::TooFewAgents(1)));
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.duration = 0.001;
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::DurationShorterThanStep { .. })
        ));
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.init = InitSpec::Explicit {
            poses: vec![[0.0; 3]; 3],
        };
        assert_eq!(
            cfg.validate(),
            Err(ConfigError::PoseCount {
                expected: 20,
                found: 3
            })
        );
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.v = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn box_init_is_seeded_and_inside() {
        let a = ScenarioConfig::reference_preset(11).initial_state();
        let b = ScenarioConfig::reference_preset(11).initial_state();
        let c = ScenarioConfig::reference_preset(12).initial_state();
        assert_eq!(a, b);
        assert_ne!(a, c);
        for ag in &a.agents {
            assert!((0.0..=2.0).contains(&ag.x) && (0.0..=2.0).contains(&ag.y));
        }
    }

    #[test]
    fn lattice_init() {
        let mut cfg = ScenarioConfig::reference_preset(0);
        cfg.n_agents = 5;
        cfg.init = InitSpec::Lattice {
            columns: 2,
            spacing: 0.5,
            heading: 0.0,
            lead_offset: 1.0,
        };
        let s = cfg.initial_state();
        assert_eq!((s.agents[3].x, s.agents[3].y), (0.5, 0.5));
        assert_eq!(s.agents[0].theta, 1.0);
        assert_eq!(s.agents[4].theta, 0.0);
    }

    #[test]
    fn first_step_acquires_without_switching() {
        let cfg = ScenarioConfig::reference_preset(5);
        let mut sim = Simulation::new(cfg).unwrap();
        let mut ev = Vec::new();
        let snap = sim.step(&mut ev).unwrap();
        assert!(ev.is_empty());
        assert!(snap.targets.iter().all(Option::is_some));
        assert!(sim
            .ledgers()
            .iter()
            .all(|l| l.as_ref().unwrap().switch_count() == 0));
    }
}
