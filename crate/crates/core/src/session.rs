//! Live simulation session: an engine driven by wall-clock ticks and a queue
//! of commands, with snapshot frames for a connected client.

use std::collections::VecDeque;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::builtin::builtin_scenario;
use crate::engine::Engine;
use crate::grid::ElectricalSample;
use crate::scenario::{Action, Scenario};

pub const MIN_SPEED: f64 = 0.1;
pub const MAX_SPEED: f64 = 100.0;
pub const DEFAULT_SCENARIO: &str = "interconnected";
/// Number of log entries carried in each frame.
pub const LOG_TAIL: usize = 20;
/// Upper bound on integration steps per tick, so a stalled caller cannot
/// trigger an unbounded catch-up.
pub const MAX_STEPS_PER_TICK: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SessionCommand {
    SetBlock { node: String, height_cm: f64 },
    SetValve { pipe: String, open: bool },
    Inject { node: String, volume_cm3: f64 },
    Pause,
    Resume,
    SetSpeed { multiplier: f64 },
    /// `scenario` is a builtin name or an inline scenario document.
    Reset { scenario: Value },
}

impl SessionCommand {
    pub fn parse(line: &str) -> Result<Self, String> {
        serde_json::from_str(line).map_err(|e| e.to_string())
    }

    fn describe(&self) -> String {
        match self {
            SessionCommand::SetBlock { node, height_cm } => format!("{node} block -> {height_cm} cm"),
            SessionCommand::SetValve { pipe, open } => {
                format!("{pipe} valve {}", if *open { "opened" } else { "closed" })
            }
            SessionCommand::Inject { node, volume_cm3 } => format!("{node} inject {volume_cm3} cm3"),
            SessionCommand::Pause => "pause".into(),
            SessionCommand::Resume => "resume".into(),
            SessionCommand::SetSpeed { multiplier } => format!("speed {multiplier}x"),
            SessionCommand::Reset { scenario } => match scenario {
                Value::String(name) => format!("reset to {name}"),
                _ => "reset to inline scenario".into(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LogSource {
    Command,
    Script,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogEntry {
    pub seq: u64,
    pub t: f64,
    pub source: LogSource,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectricalView {
    pub frequency_hz: IndexMap<String, f64>,
    pub power_out: IndexMap<String, f64>,
    pub power_rate: IndexMap<String, f64>,
    pub setpoint: IndexMap<String, f64>,
    pub tracking_error: IndexMap<String, f64>,
    pub line_flow: IndexMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionFrame {
    pub t: f64,
    pub paused: bool,
    pub speed: f64,
    pub scenario: String,
    pub levels: IndexMap<String, f64>,
    pub exited_volume: IndexMap<String, f64>,
    pub flows: IndexMap<String, f64>,
    pub base_elevation: IndexMap<String, f64>,
    pub valves: IndexMap<String, bool>,
    /// `None` when a setpoint cannot be read back from the current blocks.
    pub electrical: Option<ElectricalView>,
    pub log: Vec<LogEntry>,
}

/// Messages sent from the session to the client.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Frame(Box<SessionFrame>),
    /// Full scenario document, sent when a session starts or is reset.
    Scenario { name: String, scenario: Value },
    Error { detail: String },
}

impl ServerMessage {
    pub fn error(detail: impl Into<String>) -> Self {
        ServerMessage::Error { detail: detail.into() }
    }

    /// One line of the wire protocol, without the trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("server messages serialize")
    }
}

#[derive(Debug)]
pub struct Session {
    engine: Engine,
    scenario: Scenario,
    name: String,
    queue: VecDeque<SessionCommand>,
    paused: bool,
    speed: f64,
    /// Fractional steps owed from previous ticks.
    carry: f64,
    seq: u64,
    log: VecDeque<LogEntry>,
    script_seen: usize,
    outbox: Vec<ServerMessage>,
}

fn load_scenario(spec: &Value) -> Result<(String, Scenario), String> {
    match spec {
        Value::String(name) => builtin_scenario(name).map(|s| (name.clone(), s)).map_err(|e| e.to_string()),
        Value::Object(_) => Scenario::from_value(spec.clone())
            .map(|s| ("inline".to_string(), s))
            .map_err(|e| e.to_string()),
        _ => Err("scenario must be a builtin name or a scenario object".into()),
    }
}

impl Session {
    pub fn new(scenario_spec: &Value) -> Result<Self, String> {
        let (name, scenario) = load_scenario(scenario_spec)?;
        let engine = Engine::new(&scenario).map_err(|e| e.to_string())?;
        let mut session = Session {
            engine,
            scenario,
            name,
            queue: VecDeque::new(),
            paused: false,
            speed: 1.0,
            carry: 0.0,
            seq: 0,
            log: VecDeque::new(),
            script_seen: 0,
            outbox: Vec::new(),
        };
        session.outbox.push(session.scenario_message());
        Ok(session)
    }

    pub fn builtin(name: &str) -> Result<Self, String> {
        Self::new(&Value::String(name.into()))
    }

    pub fn time(&self) -> f64 {
        self.engine.time()
    }

    pub fn is_paused(&self) -> bool {
        self.paused
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    /// Queues a command for the next step boundary.
    pub fn submit(&mut self, command: SessionCommand) {
        self.queue.push_back(command);
    }

    /// Parses and queues one wire line; malformed lines yield an error message.
    pub fn submit_line(&mut self, line: &str) {
        match SessionCommand::parse(line) {
            Ok(cmd) => self.submit(cmd),
            Err(e) => self.outbox.push(ServerMessage::error(format!("malformed command: {e}"))),
        }
    }

    /// Messages produced since the last call (scenario announcements, errors).
    pub fn drain_messages(&mut self) -> Vec<ServerMessage> {
        std::mem::take(&mut self.outbox)
    }

    fn push_log(&mut self, t: f64, source: LogSource, description: String) {
        self.seq += 1;
        self.log.push_back(LogEntry {
            seq: self.seq,
            t,
            source,
            description,
        });
        while self.log.len() > LOG_TAIL {
            self.log.pop_front();
        }
    }

    fn sync_script_log(&mut self) {
        let fresh: Vec<_> = self.engine.log()[self.script_seen..].to_vec();
        self.script_seen = self.engine.log().len();
        for m in fresh {
            self.push_log(m.time, LogSource::Script, m.description);
        }
    }

    fn scenario_message(&self) -> ServerMessage {
        ServerMessage::Scenario {
            name: self.name.clone(),
            scenario: self.scenario.to_value(),
        }
    }

    fn execute(&mut self, command: SessionCommand) -> Result<(), String> {
        let description = command.describe();
        let action = match command {
            SessionCommand::SetBlock { node, height_cm } => Some(Action::SetBaseElevation {
                node,
                elevation: height_cm,
            }),
            SessionCommand::SetValve { pipe, open } => Some(Action::SetValve { pipe, open }),
            SessionCommand::Inject { node, volume_cm3 } => Some(Action::InjectVolume {
                node,
                volume: volume_cm3,
            }),
            SessionCommand::Pause => {
                self.paused = true;
                None
            }
            SessionCommand::Resume => {
                self.paused = false;
                None
            }
            SessionCommand::SetSpeed { multiplier } => {
                if !(MIN_SPEED..=MAX_SPEED).contains(&multiplier) {
                    return Err(format!("speed {multiplier} outside {MIN_SPEED}..{MAX_SPEED}"));
                }
                self.speed = multiplier;
                None
            }
            SessionCommand::Reset { scenario } => {
                let (name, scenario) = load_scenario(&scenario)?;
                self.engine = Engine::new(&scenario).map_err(|e| e.to_string())?;
                self.scenario = scenario;
                self.name = name;
                self.carry = 0.0;
                self.script_seen = 0;
                self.log.clear();
                self.outbox.push(self.scenario_message());
                None
            }
        };
        if let Some(action) = action {
            self.sync_script_log();
            self.engine.apply(&action).map_err(|e| e.to_string())?;
            self.script_seen = self.engine.log().len();
        }
        self.push_log(self.engine.time(), LogSource::Command, description);
        Ok(())
    }

    /// Applies queued commands in arrival order, then advances the engine by
    /// `wall_dt · speed` simulated seconds unless paused.
    pub fn tick(&mut self, wall_dt: f64) {
        while let Some(cmd) = self.queue.pop_front() {
            if let Err(e) = self.execute(cmd) {
                self.outbox.push(ServerMessage::error(e));
            }
        }
        if self.paused {
            self.carry = 0.0;
            return;
        }
        let owed = self.carry + wall_dt.max(0.0) * self.speed / self.engine.timestep();
        let steps = (owed.floor() as u64).min(MAX_STEPS_PER_TICK);
        self.carry = if steps == MAX_STEPS_PER_TICK { 0.0 } else { owed - steps as f64 };
        for _ in 0..steps {
            if let Err(e) = self.engine.advance() {
                self.paused = true;
                self.carry = 0.0;
                self.outbox.push(ServerMessage::error(format!("simulation halted: {e}")));
                break;
            }
        }
        self.sync_script_log();
    }

    pub fn frame(&self) -> SessionFrame {
        let net = self.engine.network();
        let sample = self.engine.sample();
        let node_ids = net.node_ids();
        let vessel_ids: Vec<&str> = net.vessels().iter().map(|v| v.id.as_str()).collect();
        let pipe_ids: Vec<&str> = net.pipes().iter().map(|p| p.id.as_str()).collect();
        let map = |ids: &[&str], xs: &[f64]| -> IndexMap<String, f64> {
            ids.iter().map(|s| s.to_string()).zip(xs.iter().copied()).collect()
        };
        let electrical = ElectricalSample::from_sample(&sample, net, self.engine.unit_map())
            .ok()
            .map(|e| ElectricalView {
                frequency_hz: map(&node_ids, &e.frequencies_hz),
                power_out: map(&vessel_ids, &e.power_out),
                power_rate: map(&vessel_ids, &e.power_rate),
                setpoint: map(&vessel_ids, &e.setpoints),
                tracking_error: map(&vessel_ids, &e.tracking_error),
                line_flow: map(&pipe_ids, &e.line_flows),
            });
        SessionFrame {
            t: sample.t,
            paused: self.paused,
            speed: self.speed,
            scenario: self.name.clone(),
            levels: map(&node_ids, &sample.levels),
            exited_volume: map(&vessel_ids, &sample.exited),
            flows: map(&pipe_ids, &sample.flows),
            base_elevation: map(&vessel_ids, &sample.base_elevations),
            valves: pipe_ids.iter().map(|s| s.to_string()).zip(sample.valves.iter().copied()).collect(),
            electrical,
            log: self.log.iter().cloned().collect(),
        }
    }

    pub fn frame_message(&self) -> ServerMessage {
        ServerMessage::Frame(Box::new(self.frame()))
    }
}
