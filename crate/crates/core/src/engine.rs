//! Runs scenarios: applies scripted events at step boundaries, integrates
//! between them and records a uniformly sampled time series.

use std::fmt::Write as _;

use thiserror::Error;

use crate::droop::UnitMap;
use crate::equilibrium::{equilibrium, EquilibriumError, EquilibriumResult};
use crate::hydraulics::{pipe_flows, step, SimulationState, StepError};
use crate::network::{Network, NetworkError};
use crate::scenario::{Action, Event, Scenario};
use crate::validate::{validate, Violation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("invalid scenario: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

/// Slack when snapping event times onto the step grid.
const SNAP_TOL: f64 = 1e-9;

/// Index of the first step boundary at or after `time`.
pub fn step_of_time(time: f64, dt: f64) -> u64 {
    (time / dt - SNAP_TOL).ceil().max(0.0) as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventMarker {
    pub time: f64,
    pub description: String,
}

/// Everything recorded at one sample instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    /// Absolute level of every node, vessels first then tanks.
    pub levels: Vec<f64>,
    pub volumes: Vec<f64>,
    pub exited: Vec<f64>,
    pub flows: Vec<f64>,
    pub base_elevations: Vec<f64>,
    /// Whether each pipe's valve was open.
    pub valves: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub node_ids: Vec<String>,
    pub vessel_ids: Vec<String>,
    pub pipe_ids: Vec<String>,
    pub samples: Vec<Sample>,
    pub markers: Vec<EventMarker>,
    pub sample_interval: f64,
    pub unit_map: UnitMap,
    /// Volumes at t = 0, for the exited-volume identity.
    pub initial_volumes: Vec<f64>,
}

impl TimeSeries {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("series has at least the initial sample")
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_ids.iter().position(|n| n == id)
    }

    pub fn vessel_index(&self, id: &str) -> Option<usize> {
        self.vessel_ids.iter().position(|n| n == id)
    }

    pub fn pipe_index(&self, id: &str) -> Option<usize> {
        self.pipe_ids.iter().position(|n| n == id)
    }

    /// Latest sample taken at or before `t`.
    pub fn at(&self, t: f64) -> &Sample {
        let i = self.samples.partition_point(|s| s.t <= t + SNAP_TOL * self.sample_interval);
        &self.samples[i.saturating_sub(1)]
    }
}

/// Integrator state for one scenario, advanced one step at a time.
///
/// External actions are applied between steps, so a run interleaving
/// scripted events and live commands stays deterministic for a given order.
#[derive(Debug, Clone)]
pub struct Engine {
    network: Network,
    state: SimulationState,
    dt: f64,
    step_index: u64,
    events: Vec<(u64, Event)>,
    next_event: usize,
    log: Vec<EventMarker>,
    unit_map: UnitMap,
}

impl Engine {
    pub fn new(scenario: &Scenario) -> Result<Self, RunError> {
        let violations = validate(scenario);
        if !violations.is_empty() {
            return Err(RunError::Invalid(violations));
        }
        let state = SimulationState::initial(&scenario.network)?;
        let dt = scenario.timestep;
        Ok(Engine {
            network: scenario.network.clone(),
            state,
            dt,
            step_index: 0,
            events: scenario.events.iter().map(|e| (step_of_time(e.time, dt), e.clone())).collect(),
            next_event: 0,
            log: Vec::new(),
            unit_map: scenario.unit_map,
        })
    }

    pub fn time(&self) -> f64 {
        self.step_index as f64 * self.dt
    }

    pub fn timestep(&self) -> f64 {
        self.dt
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn state(&self) -> &SimulationState {
        &self.state
    }

    pub fn unit_map(&self) -> &UnitMap {
        &self.unit_map
    }

    pub fn log(&self) -> &[EventMarker] {
        &self.log
    }

    /// Applies `action` now, at the current step boundary.
    pub fn apply(&mut self, action: &Action) -> Result<(), RunError> {
        match action {
            Action::SetBaseElevation { node, elevation } => self.network.set_base_elevation(node, *elevation)?,
            Action::SetValve { pipe, open } => self.network.set_valve(pipe, *open)?,
            Action::SetTankLevel { tank, level } => self.network.set_tank_level(tank, *level)?,
            Action::InjectVolume { node, volume } => {
                let k = self.network.vessel_index(node)?;
                let mut next = self.state.clone();
                next.inject(&self.network, k, *volume)?;
                self.state = next;
            }
        }
        self.log.push(EventMarker {
            time: self.time(),
            description: action.describe(),
        });
        Ok(())
    }

    /// Applies every scripted event that falls on or before the current step.
    pub fn apply_due_events(&mut self) -> Result<(), RunError> {
        while let Some((at, event)) = self.events.get(self.next_event) {
            if *at > self.step_index {
                break;
            }
            let action = event.action.clone();
            self.next_event += 1;
            self.apply(&action)?;
        }
        Ok(())
    }

    /// Integrates one step without looking at the event script.
    pub fn integrate(&mut self) -> Result<(), RunError> {
        let mut next = step(&self.network, &self.state, self.dt)?;
        self.step_index += 1;
        next.time = self.time();
        self.state = next;
        Ok(())
    }

    /// Applies due events, then integrates one step.
    pub fn advance(&mut self) -> Result<(), RunError> {
        self.apply_due_events()?;
        self.integrate()
    }

    pub fn sample(&self) -> Sample {
        Sample {
            t: self.time(),
            levels: self.state.absolute_levels(&self.network),
            volumes: self.state.volumes.clone(),
            exited: self.state.exited_volumes(),
            flows: pipe_flows(&self.network, &self.state),
            base_elevations: self.network.vessels().iter().map(|v| v.base_elevation).collect(),
            valves: self.network.pipes().iter().map(|p| p.valve_open).collect(),
        }
    }

    /// Where each component would settle under the current topology.
    pub fn equilibrium(&self) -> Result<EquilibriumResult, EquilibriumError> {
        equilibrium(&self.network, &self.state)
    }

    fn empty_series(&self, sample_interval: f64) -> TimeSeries {
        TimeSeries {
            node_ids: self.network.node_ids().into_iter().map(String::from).collect(),
            vessel_ids: self.network.vessels().iter().map(|v| v.id.clone()).collect(),
            pipe_ids: self.network.pipes().iter().map(|p| p.id.clone()).collect(),
            samples: Vec::new(),
            markers: Vec::new(),
            sample_interval,
            unit_map: self.unit_map,
            initial_volumes: self.state.initial_volumes.clone(),
        }
    }

    /// Runs to `steps` total steps, sampling every `stride` steps. Events due
    /// at a step are applied before that step's sample is taken.
    pub fn record(&mut self, steps: u64, stride: u64) -> Result<TimeSeries, RunError> {
        let mut series = self.empty_series(stride as f64 * self.dt);
        loop {
            self.apply_due_events()?;
            if self.step_index.is_multiple_of(stride) {
                series.samples.push(self.sample());
            }
            if self.step_index >= steps {
                break;
            }
            self.integrate()?;
        }
        series.markers = self.log.clone();
        Ok(series)
    }
}

/// Runs a scenario end to end.
pub fn run(scenario: &Scenario) -> Result<TimeSeries, RunError> {
    run_with_engine(scenario).map(|(series, _)| series)
}

/// Runs a scenario and also returns the engine at the final instant.
pub fn run_with_engine(scenario: &Scenario) -> Result<(TimeSeries, Engine), RunError> {
    let mut engine = Engine::new(scenario)?;
    let steps = (scenario.duration / scenario.timestep).round() as u64;
    let stride = ((scenario.sample_interval / scenario.timestep).round() as u64).max(1);
    let series = engine.record(steps, stride)?;
    Ok((series, engine))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    #[default]
    Hydraulic,
    Electrical,
}

impl std::str::FromStr for Domain {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "hydraulic" => Ok(Domain::Hydraulic),
            "electrical" => Ok(Domain::Electrical),
            other => Err(format!("unknown domain '{other}' (expected hydraulic or electrical)")),
        }
    }
}

/// Fixed nine-decimal formatting; negative zero prints as zero.
pub fn format_value(x: f64) -> String {
    let s = format!("{x:.9}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Renders the series as CSV with one row per sample.
///
/// Hydraulic columns are `<node>.level`, `<vessel>.exited_volume`,
/// `<pipe>.flow`. The electrical domain maps them through the series' unit map
/// to `<node>.freq_hz`, `<vessel>.power_out`, `<pipe>.power_flow`.
pub fn export_csv(series: &TimeSeries, domain: Domain) -> String {
    let (lvl, out, flow) = match domain {
        Domain::Hydraulic => ("level", "exited_volume", "flow"),
        Domain::Electrical => ("freq_hz", "power_out", "power_flow"),
    };
    let unit = series.unit_map;
    let level = |x: f64| match domain {
        Domain::Hydraulic => x,
        Domain::Electrical => unit.frequency(x),
    };
    let volume = |x: f64| match domain {
        Domain::Hydraulic => x,
        Domain::Electrical => unit.power(x),
    };

    let mut header = vec!["t".to_string()];
    header.extend(series.node_ids.iter().map(|n| format!("{n}.{lvl}")));
    header.extend(series.vessel_ids.iter().map(|v| format!("{v}.{out}")));
    header.extend(series.pipe_ids.iter().map(|p| format!("{p}.{flow}")));

    let mut text = header.join(",");
    text.push('\n');
    for s in &series.samples {
        let row = std::iter::once(format_value(s.t))
            .chain(s.levels.iter().map(|&x| format_value(level(x))))
            .chain(s.exited.iter().map(|&x| format_value(volume(x))))
            .chain(s.flows.iter().map(|&x| format_value(volume(x))));
        let mut first = true;
        for cell in row {
            if !first {
                text.push(',');
            }
            first = false;
            text.push_str(&cell);
        }
        text.push('\n');
    }
    text
}

/// Sidecar listing of applied events, `t,description`.
pub fn export_markers(series: &TimeSeries) -> String {
    let mut text = String::from("t,description\n");
    for m in &series.markers {
        let _ = writeln!(text, "{},\"{}\"", format_value(m.time), m.description.replace('"', "'"));
    }
    text
}
