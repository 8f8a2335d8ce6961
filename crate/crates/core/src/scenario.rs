//! Scenarios: a network plus a timed script of events, and their JSON form.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::droop::UnitMap;
use crate::grid::{ElectricalScenarioDoc, GridError};
use crate::network::{InfiniteTank, Network, Pipe, Vessel, DEFAULT_CONDUCTANCE, DEFAULT_MAX_HEIGHT, NOMINAL_LEVEL};
use crate::profile::AreaProfile;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    SetBaseElevation {
        node: String,
        #[serde(rename = "elevation_cm")]
        elevation: f64,
    },
    SetValve {
        pipe: String,
        open: bool,
    },
    /// Adds (positive) or removes (negative) water from a vessel.
    InjectVolume {
        node: String,
        #[serde(rename = "volume_cm3")]
        volume: f64,
    },
    SetTankLevel {
        tank: String,
        #[serde(rename = "level_cm")]
        level: f64,
    },
}

impl Action {
    pub fn describe(&self) -> String {
        match self {
            Action::SetBaseElevation { node, elevation } => format!("{node} base elevation -> {elevation} cm"),
            Action::SetValve { pipe, open } => {
                format!("{pipe} valve {}", if *open { "opened" } else { "closed" })
            }
            Action::InjectVolume { node, volume } => format!("{node} inject {volume} cm3"),
            Action::SetTankLevel { tank, level } => format!("{tank} level -> {level} cm"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    #[serde(rename = "time_s")]
    pub time: f64,
    #[serde(flatten)]
    pub action: Action,
}

impl Event {
    pub fn new(time: f64, action: Action) -> Self {
        Event { time, action }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub network: Network,
    pub events: Vec<Event>,
    pub duration: f64,
    pub timestep: f64,
    pub sample_interval: f64,
    /// Used when reporting in electrical units.
    pub unit_map: UnitMap,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("invalid scenario JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad override '{0}': {1}")]
    Override(String, String),
    #[error("unknown domain '{0}' (expected \"hydraulic\" or \"electrical\")")]
    Domain(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

impl LoadError {
    /// Whether the file was readable but described an invalid system.
    pub fn is_semantic(&self) -> bool {
        matches!(self, LoadError::Grid(_))
    }
}

// On-disk representation.

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum NodeDoc {
    Vessel {
        id: String,
        profile: AreaProfile,
        #[serde(default)]
        base_elevation_cm: f64,
        initial_level_cm: f64,
        #[serde(default = "default_max_height")]
        max_height_cm: f64,
    },
    Tank {
        id: String,
        #[serde(default = "default_tank_level")]
        fixed_level_cm: f64,
    },
}

fn default_max_height() -> f64 {
    DEFAULT_MAX_HEIGHT
}

fn default_tank_level() -> f64 {
    NOMINAL_LEVEL
}

fn default_conductance() -> f64 {
    DEFAULT_CONDUCTANCE
}

fn default_true() -> bool {
    true
}

#[derive(Serialize, Deserialize)]
struct PipeDoc {
    id: String,
    from: String,
    to: String,
    #[serde(default = "default_conductance")]
    conductance: f64,
    #[serde(default = "default_true")]
    valve_open: bool,
}

#[derive(Serialize, Deserialize)]
struct NetworkDoc {
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    pipes: Vec<PipeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HydraulicScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    unit_map: Option<UnitMap>,
    network: NetworkDoc,
    #[serde(default)]
    events: Vec<Event>,
    duration_s: f64,
    timestep_s: f64,
    sample_interval_s: f64,
}

impl From<NetworkDoc> for Network {
    fn from(doc: NetworkDoc) -> Self {
        let mut vessels = Vec::new();
        let mut tanks = Vec::new();
        for node in doc.nodes {
            match node {
                NodeDoc::Vessel {
                    id,
                    profile,
                    base_elevation_cm,
                    initial_level_cm,
                    max_height_cm,
                } => vessels.push(Vessel {
                    id,
                    profile,
                    base_elevation: base_elevation_cm,
                    initial_level: initial_level_cm,
                    max_height: max_height_cm,
                }),
                NodeDoc::Tank { id, fixed_level_cm } => tanks.push(InfiniteTank {
                    id,
                    fixed_level: fixed_level_cm,
                }),
            }
        }
        let pipes = doc
            .pipes
            .into_iter()
            .map(|p| Pipe {
                id: p.id,
                from: p.from,
                to: p.to,
                conductance: p.conductance,
                valve_open: p.valve_open,
            })
            .collect();
        Network::new(vessels, tanks, pipes)
    }
}

impl From<&Network> for NetworkDoc {
    fn from(net: &Network) -> Self {
        let nodes = net
            .vessels()
            .iter()
            .map(|v| NodeDoc::Vessel {
                id: v.id.clone(),
                profile: v.profile.clone(),
                base_elevation_cm: v.base_elevation,
                initial_level_cm: v.initial_level,
                max_height_cm: v.max_height,
            })
            .chain(net.tanks().iter().map(|t| NodeDoc::Tank {
                id: t.id.clone(),
                fixed_level_cm: t.fixed_level,
            }))
            .collect();
        let pipes = net
            .pipes()
            .iter()
            .map(|p| PipeDoc {
                id: p.id.clone(),
                from: p.from.clone(),
                to: p.to.clone(),
                conductance: p.conductance,
                valve_open: p.valve_open,
            })
            .collect();
        NetworkDoc { nodes, pipes }
    }
}

impl Scenario {
    /// Parses a scenario document in either domain.
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Self::from_value(serde_json::from_str(text)?)
    }

    /// Parses after applying `key=value` overrides (see [`apply_override`]).
    pub fn from_json_with_overrides(text: &str, overrides: &[String]) -> Result<Self, LoadError> {
        let mut doc: Value = serde_json::from_str(text)?;
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        Self::from_value(doc)
    }

    pub fn from_value(doc: Value) -> Result<Self, LoadError> {
        match doc.get("domain").and_then(Value::as_str).unwrap_or("hydraulic") {
            "hydraulic" => {
                let d: HydraulicScenarioDoc = serde_json::from_value(doc)?;
                Ok(Scenario {
                    network: d.network.into(),
                    events: d.events,
                    duration: d.duration_s,
                    timestep: d.timestep_s,
                    sample_interval: d.sample_interval_s,
                    unit_map: d.unit_map.unwrap_or_default(),
                })
            }
            "electrical" => {
                let d: ElectricalScenarioDoc = serde_json::from_value(doc)?;
                Ok(d.into_scenario()?)
            }
            other => Err(LoadError::Domain(other.to_string())),
        }
    }

    /// Hydraulic-domain JSON document.
    pub fn to_value(&self) -> Value {
        let doc = HydraulicScenarioDoc {
            domain: Some("hydraulic".into()),
            unit_map: (self.unit_map != UnitMap::IDENTITY).then_some(self.unit_map),
            network: (&self.network).into(),
            events: self.events.clone(),
            duration_s: self.duration,
            timestep_s: self.timestep,
            sample_interval_s: self.sample_interval,
        };
        serde_json::to_value(doc).expect("scenario serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("scenario serializes");
        s.push('\n');
        s
    }
}

/// Sets a value inside a scenario document by dotted path, e.g.
/// `duration_s=60` or `network.pipes.p12.conductance=2`.
///
/// Array elements are addressed by index or by their `id` field. The value
/// is parsed as JSON, falling back to a plain string.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), LoadError> {
    let bad = |why: &str| LoadError::Override(spec.to_string(), why.to_string());
    let (path, raw) = spec.split_once('=').ok_or_else(|| bad("expected key=value"))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cursor = doc;
    let keys: Vec<&str> = path.split('.').collect();
    for (depth, key) in keys.iter().enumerate() {
        let last = depth + 1 == keys.len();
        cursor = match cursor {
            Value::Object(map) => {
                if last {
                    map.insert(key.to_string(), value);
                    return Ok(());
                }
                map.get_mut(*key).ok_or_else(|| bad(&format!("no key '{key}'")))?
            }
            Value::Array(items) => {
                let idx = match key.parse::<usize>() {
                    Ok(i) if i < items.len() => i,
                    _ => items
                        .iter()
                        .position(|it| it.get("id").and_then(Value::as_str) == Some(key))
                        .ok_or_else(|| bad(&format!("no element '{key}'")))?,
                };
                if last {
                    items[idx] = value;
                    return Ok(());
                }
                &mut items[idx]
            }
            _ => return Err(bad(&format!("cannot descend into '{key}'"))),
        };
    }
    Err(bad("empty path"))
}
