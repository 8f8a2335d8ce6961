//! Electrical description of a grid of droop-controlled sources and its
//! one-to-one translation into a vessel network.
//!
//! Each source becomes a vessel whose cross-section mirrors its droop slope
//! (or curve), whose water level at rest mirrors its nominal frequency and
//! whose block height mirrors its power setpoint. Infinite buses become
//! tanks and lines become pipes, with the line coupling used directly as the
//! pipe conductance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::droop::{droop_curve_from_profile, droop_slope, profile_from_droop_curve, CurveKind, DroopCurve, DroopError, UnitMap};
use crate::engine::{Sample, TimeSeries};
use crate::network::{InfiniteTank, Network, NodeRef, Pipe, Vessel, DEFAULT_MAX_HEIGHT};
use crate::profile::{level_from_volume, AreaProfile};
use crate::scenario::{Action, Event, Scenario};

/// Tolerance for a curve source passing through its nominal point.
const NOMINAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("{entity}: missing attribute '{attribute}'")]
    MissingAttribute { entity: String, attribute: &'static str },
    #[error("{entity}: {source}")]
    Droop {
        entity: String,
        #[source]
        source: DroopError,
    },
    #[error("source '{0}': droop curve must pass through (0 W, f_nom)")]
    CurveOffNominal(String),
    #[error("source '{0}': setpoint is beyond what the vessel can deliver")]
    SetpointBeyondCapacity(String),
    #[error("unknown {kind} '{id}'")]
    Unknown { kind: &'static str, id: String },
}

fn droop_err(entity: &str) -> impl FnOnce(DroopError) -> GridError + '_ {
    move |source| GridError::Droop {
        entity: entity.to_string(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DroopSpec {
    Linear {
        m_p: f64,
    },
    /// Slope chosen from the frequency drop allowed at rated power.
    Rated {
        delta_f_hz: f64,
        s_rated_w: f64,
    },
    /// Non-linear characteristic at zero setpoint; must pass through `(0, f_nom)`.
    Curve {
        points: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shape: Option<CurveKind>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub id: String,
    #[serde(default)]
    pub f_nom_hz: Option<f64>,
    #[serde(default)]
    pub p_ref_w: Option<f64>,
    #[serde(default)]
    pub droop: Option<DroopSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_height_cm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfiniteBus {
    pub id: String,
    #[serde(default)]
    pub frequency_hz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(default)]
    pub coupling: Option<f64>,
    #[serde(default = "in_service_default")]
    pub in_service: bool,
}

fn in_service_default() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GridSpec {
    pub sources: Vec<Source>,
    #[serde(default)]
    pub buses: Vec<InfiniteBus>,
    #[serde(default)]
    pub lines: Vec<Line>,
}

fn require<T: Copy>(value: Option<T>, entity: &str, attribute: &'static str) -> Result<T, GridError> {
    value.ok_or_else(|| GridError::MissingAttribute {
        entity: entity.to_string(),
        attribute,
    })
}

fn source_profile(source: &Source, f_nom: f64, unit: &UnitMap) -> Result<AreaProfile, GridError> {
    let entity = format!("source '{}'", source.id);
    let droop = source.droop.as_ref().ok_or_else(|| GridError::MissingAttribute {
        entity: entity.clone(),
        attribute: "droop",
    })?;
    let slope = match droop {
        DroopSpec::Linear { m_p } => *m_p,
        DroopSpec::Rated { delta_f_hz, s_rated_w } => droop_slope(*delta_f_hz, *s_rated_w).map_err(droop_err(&entity))?,
        DroopSpec::Curve { points, shape } => {
            let curve = DroopCurve::new(points.clone(), shape.unwrap_or(CurveKind::Sampled)).map_err(droop_err(&entity))?;
            let at_zero = curve
                .frequency_at(0.0)
                .map_err(|_| GridError::CurveOffNominal(source.id.clone()))?;
            if (at_zero - f_nom).abs() > NOMINAL_TOL * f_nom.abs().max(1.0) {
                return Err(GridError::CurveOffNominal(source.id.clone()));
            }
            return profile_from_droop_curve(&curve, unit).map_err(droop_err(&entity));
        }
    };
    if !(slope.is_finite() && slope > 0.0) {
        return Err(droop_err(&entity)(DroopError::NonPositive {
            name: "m_p",
            value: slope,
        }));
    }
    Ok(AreaProfile::uniform(unit.area_for_slope(slope)))
}

/// Block height that makes `vessel` deliver `p_ref` at its nominal level.
pub fn base_for_setpoint(vessel: &Vessel, p_ref: f64, unit: &UnitMap) -> Result<f64, GridError> {
    let volume = unit.volume(p_ref);
    if let Some(area) = vessel.profile.uniform_area() {
        return Ok(volume / area);
    }
    let h0 = vessel.initial_level;
    let remaining = vessel.profile.volume_extended(h0) - volume;
    let level = level_from_volume(&vessel.profile, remaining)
        .map_err(|_| GridError::SetpointBeyondCapacity(vessel.id.clone()))?;
    Ok(h0 - level)
}

/// Setpoint mirrored by `vessel` standing on a block of height `base`.
pub fn setpoint_for_base(vessel: &Vessel, base: f64, unit: &UnitMap) -> Result<f64, GridError> {
    if let Some(area) = vessel.profile.uniform_area() {
        return Ok(unit.power(area * base));
    }
    let h0 = vessel.initial_level;
    let below = h0 - base;
    if !(0.0..=vessel.max_height).contains(&below) {
        return Err(GridError::SetpointBeyondCapacity(vessel.id.clone()));
    }
    Ok(unit.power(vessel.profile.volume_extended(h0) - vessel.profile.volume_extended(below)))
}

/// Builds the vessel network mirroring `grid`.
pub fn grid_to_vessels(grid: &GridSpec, unit: &UnitMap) -> Result<Network, GridError> {
    unit.check().map_err(droop_err("unit_map"))?;
    let mut vessels = Vec::with_capacity(grid.sources.len());
    for s in &grid.sources {
        let entity = format!("source '{}'", s.id);
        let f_nom = require(s.f_nom_hz, &entity, "f_nom_hz")?;
        let p_ref = require(s.p_ref_w, &entity, "p_ref_w")?;
        let max_height = s.max_height_cm.unwrap_or(DEFAULT_MAX_HEIGHT);
        let profile = source_profile(s, f_nom, unit)?;
        let level = unit.level(f_nom);
        if !(0.0..=max_height).contains(&level) {
            return Err(droop_err(&entity)(DroopError::NominalOutOfRange { f_nom }));
        }
        let mut vessel = Vessel {
            id: s.id.clone(),
            profile,
            base_elevation: 0.0,
            initial_level: level,
            max_height,
        };
        vessel.base_elevation = base_for_setpoint(&vessel, p_ref, unit)?;
        vessels.push(vessel);
    }
    let tanks = grid
        .buses
        .iter()
        .map(|b| {
            let f = require(b.frequency_hz, &format!("bus '{}'", b.id), "frequency_hz")?;
            Ok(InfiniteTank {
                id: b.id.clone(),
                fixed_level: unit.level(f),
            })
        })
        .collect::<Result<Vec<_>, GridError>>()?;
    let pipes = grid
        .lines
        .iter()
        .map(|l| {
            Ok(Pipe {
                id: l.id.clone(),
                from: l.from.clone(),
                to: l.to.clone(),
                conductance: require(l.coupling, &format!("line '{}'", l.id), "coupling")?,
                valve_open: l.in_service,
            })
        })
        .collect::<Result<Vec<_>, GridError>>()?;
    Ok(Network::new(vessels, tanks, pipes))
}

/// Reads a vessel network back as a grid description.
pub fn vessels_to_grid(net: &Network, unit: &UnitMap) -> Result<GridSpec, GridError> {
    unit.check().map_err(droop_err("unit_map"))?;
    let sources = net
        .vessels()
        .iter()
        .map(|v| {
            let f_nom = unit.frequency(v.initial_level);
            let droop = match v.profile.uniform_area() {
                Some(area) => DroopSpec::Linear {
                    m_p: unit.slope_for_area(area),
                },
                None => {
                    let curve = droop_curve_from_profile(&v.profile, v.max_height, f_nom, 0.0, unit)
                        .map_err(droop_err(&v.id))?;
                    DroopSpec::Curve {
                        points: curve.points().to_vec(),
                        shape: Some(curve.kind()),
                    }
                }
            };
            Ok(Source {
                id: v.id.clone(),
                f_nom_hz: Some(f_nom),
                p_ref_w: Some(setpoint_for_base(v, v.base_elevation, unit)?),
                droop: Some(droop),
                max_height_cm: Some(v.max_height),
            })
        })
        .collect::<Result<Vec<_>, GridError>>()?;
    let buses = net
        .tanks()
        .iter()
        .map(|t| InfiniteBus {
            id: t.id.clone(),
            frequency_hz: Some(unit.frequency(t.fixed_level)),
        })
        .collect();
    let lines = net
        .pipes()
        .iter()
        .map(|p| Line {
            id: p.id.clone(),
            from: p.from.clone(),
            to: p.to.clone(),
            coupling: Some(p.conductance),
            in_service: p.valve_open,
        })
        .collect();
    Ok(GridSpec { sources, buses, lines })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum ElectricalAction {
    SetSetpoint { source: String, p_ref_w: f64 },
    SetLine { line: String, in_service: bool },
    /// Energy pushed into (positive) or drawn from a source's store.
    InjectEnergy { source: String, energy_ws: f64 },
    SetBusFrequency { bus: String, frequency_hz: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricalEvent {
    pub time_s: f64,
    #[serde(flatten)]
    pub action: ElectricalAction,
}

/// Scenario document with `"domain": "electrical"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectricalScenarioDoc {
    pub domain: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_map: Option<UnitMap>,
    pub grid: GridSpec,
    #[serde(default)]
    pub events: Vec<ElectricalEvent>,
    pub duration_s: f64,
    pub timestep_s: f64,
    pub sample_interval_s: f64,
}

impl ElectricalScenarioDoc {
    pub fn into_scenario(self) -> Result<Scenario, GridError> {
        let unit = self.unit_map.unwrap_or_default();
        let network = grid_to_vessels(&self.grid, &unit)?;
        let events = self
            .events
            .iter()
            .map(|e| electrical_to_action(&network, &e.action, &unit).map(|action| Event::new(e.time_s, action)))
            .collect::<Result<_, _>>()?;
        Ok(Scenario {
            network,
            events,
            duration: self.duration_s,
            timestep: self.timestep_s,
            sample_interval: self.sample_interval_s,
            unit_map: unit,
        })
    }
}

/// Translates an electrical-domain action into its hydraulic counterpart.
pub fn electrical_to_action(net: &Network, action: &ElectricalAction, unit: &UnitMap) -> Result<Action, GridError> {
    let vessel = |id: &str| match net.node(id) {
        Some(NodeRef::Vessel(k)) => Ok(&net.vessels()[k]),
        _ => Err(GridError::Unknown {
            kind: "source",
            id: id.to_string(),
        }),
    };
    Ok(match action {
        ElectricalAction::SetSetpoint { source, p_ref_w } => Action::SetBaseElevation {
            node: source.clone(),
            elevation: base_for_setpoint(vessel(source)?, *p_ref_w, unit)?,
        },
        ElectricalAction::SetLine { line, in_service } => Action::SetValve {
            pipe: line.clone(),
            open: *in_service,
        },
        ElectricalAction::InjectEnergy { source, energy_ws } => {
            vessel(source)?;
            Action::InjectVolume {
                node: source.clone(),
                volume: unit.volume(*energy_ws),
            }
        }
        ElectricalAction::SetBusFrequency { bus, frequency_hz } => Action::SetTankLevel {
            tank: bus.clone(),
            level: unit.level(*frequency_hz),
        },
    })
}

/// One sample read in electrical units.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectricalSample {
    pub t: f64,
    /// Per node, sources first then buses.
    pub frequencies_hz: Vec<f64>,
    /// Cumulative delivered power proxy (exited volume) per source.
    pub power_out: Vec<f64>,
    /// Time derivative of `power_out`: net outflow per source.
    pub power_rate: Vec<f64>,
    pub setpoints: Vec<f64>,
    /// `setpoint − power_out` per source.
    pub tracking_error: Vec<f64>,
    pub line_flows: Vec<f64>,
}

impl ElectricalSample {
    pub fn from_sample(sample: &Sample, net: &Network, unit: &UnitMap) -> Result<Self, GridError> {
        let mut outflow = vec![0.0; net.vessels().len()];
        for (i, q) in sample.flows.iter().enumerate() {
            if let Some((a, b)) = net.endpoints(i) {
                if let NodeRef::Vessel(k) = a {
                    outflow[k] += q;
                }
                if let NodeRef::Vessel(k) = b {
                    outflow[k] -= q;
                }
            }
        }
        let power_out: Vec<f64> = sample.exited.iter().map(|&x| unit.power(x)).collect();
        let setpoints = net
            .vessels()
            .iter()
            .zip(&sample.base_elevations)
            .map(|(v, &z)| setpoint_for_base(v, z, unit))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ElectricalSample {
            t: sample.t,
            frequencies_hz: sample.levels.iter().map(|&l| unit.frequency(l)).collect(),
            tracking_error: setpoints.iter().zip(&power_out).map(|(s, p)| s - p).collect(),
            power_out,
            power_rate: outflow.iter().map(|&q| unit.power(q)).collect(),
            setpoints,
            line_flows: sample.flows.iter().map(|&q| unit.power(q)).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElectricalSeries {
    pub node_ids: Vec<String>,
    pub source_ids: Vec<String>,
    pub line_ids: Vec<String>,
    pub samples: Vec<ElectricalSample>,
}

/// Reads a recorded run in electrical units. `net` is the scenario's
/// network as built (its profiles and initial levels define the mapping).
pub fn vessels_to_grid_view(series: &TimeSeries, net: &Network, unit: &UnitMap) -> Result<ElectricalSeries, GridError> {
    unit.check().map_err(droop_err("unit_map"))?;
    Ok(ElectricalSeries {
        node_ids: series.node_ids.clone(),
        source_ids: series.vessel_ids.clone(),
        line_ids: series.pipe_ids.clone(),
        samples: series
            .samples
            .iter()
            .map(|s| ElectricalSample::from_sample(s, net, unit))
            .collect::<Result<_, _>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::interconnected_demo;
    use crate::engine::run;
    use approx::assert_relative_eq;
    use serde_json::json;

    fn linear(id: &str, m_p: f64, p_ref: f64) -> Source {
        Source {
            id: id.into(),
            f_nom_hz: Some(60.0),
            p_ref_w: Some(p_ref),
            droop: Some(DroopSpec::Linear { m_p }),
            max_height_cm: None,
        }
    }

    #[test]
    fn single_source_maps_to_one_vessel() {
        let grid = GridSpec {
            sources: vec![linear("s1", 0.4, 0.0)],
            ..Default::default()
        };
        let net = grid_to_vessels(&grid, &UnitMap::IDENTITY).unwrap();
        let v = &net.vessels()[0];
        assert_relative_eq!(v.profile.uniform_area().unwrap(), 2.5, max_relative = 1e-15);
        assert_eq!(v.base_elevation, 0.0);
        assert_eq!(v.initial_level, 60.0);
    }

    #[test]
    fn setpoint_becomes_block_volume() {
        let grid = GridSpec {
            sources: vec![linear("s1", 0.4, 30.0)],
            ..Default::default()
        };
        let net = grid_to_vessels(&grid, &UnitMap::IDENTITY).unwrap();
        // 30 W over 2.5 cm² is a 12 cm block.
        assert_relative_eq!(net.vessels()[0].base_elevation, 12.0, max_relative = 1e-14);
    }

    fn mixed_grid() -> GridSpec {
        GridSpec {
            sources: vec![
                linear("s1", 0.4, 5.0),
                Source {
                    id: "s2".into(),
                    f_nom_hz: Some(60.0),
                    p_ref_w: Some(20.0),
                    droop: Some(DroopSpec::Curve {
                        points: vec![(-20.0, 65.0), (0.0, 60.0), (20.0, 55.0), (60.0, 35.0)],
                        shape: Some(CurveKind::PiecewiseLinear),
                    }),
                    max_height_cm: Some(70.0),
                },
            ],
            buses: vec![InfiniteBus {
                id: "bulk".into(),
                frequency_hz: Some(60.0),
            }],
            lines: vec![
                Line {
                    id: "l1".into(),
                    from: "s1".into(),
                    to: "s2".into(),
                    coupling: Some(2.0),
                    in_service: true,
                },
                Line {
                    id: "l2".into(),
                    from: "s2".into(),
                    to: "bulk".into(),
                    coupling: Some(0.5),
                    in_service: false,
                },
            ],
        }
    }

    #[test]
    fn grid_round_trip() {
        for unit in [
            UnitMap::IDENTITY,
            UnitMap {
                hz_per_cm: 0.5,
                hz_offset: 30.0,
                watts_per_cm3: 4.0,
            },
        ] {
            let grid = mixed_grid();
            let back = vessels_to_grid(&grid_to_vessels(&grid, &unit).unwrap(), &unit).unwrap();
            assert_eq!(back.buses, grid.buses);
            assert_eq!(back.lines, grid.lines);
            let (a, b) = (&grid.sources[0], &back.sources[0]);
            assert_relative_eq!(a.p_ref_w.unwrap(), b.p_ref_w.unwrap(), max_relative = 1e-12);
            assert_relative_eq!(a.f_nom_hz.unwrap(), b.f_nom_hz.unwrap(), max_relative = 1e-12);
            match (&a.droop, &b.droop) {
                (Some(DroopSpec::Linear { m_p: x }), Some(DroopSpec::Linear { m_p: y })) => {
                    assert_relative_eq!(x, y, max_relative = 1e-12)
                }
                other => panic!("{other:?}"),
            }
            let (a, b) = (&grid.sources[1], &back.sources[1]);
            assert_relative_eq!(a.p_ref_w.unwrap(), b.p_ref_w.unwrap(), max_relative = 1e-9);
            assert_relative_eq!(a.f_nom_hz.unwrap(), b.f_nom_hz.unwrap(), max_relative = 1e-12);
            let (Some(DroopSpec::Curve { points: orig, .. }), Some(DroopSpec::Curve { points, shape })) = (&a.droop, &b.droop)
            else {
                panic!("curve lost");
            };
            let regenerated = DroopCurve::new(points.clone(), shape.unwrap()).unwrap();
            for &(p, f) in orig {
                assert!((regenerated.frequency_at(p).unwrap() - f).abs() < 1e-6, "{p} {f}");
            }
        }
    }

    #[test]
    fn missing_attributes() {
        let mut grid = mixed_grid();
        grid.sources[0].droop = None;
        assert!(matches!(
            grid_to_vessels(&grid, &UnitMap::IDENTITY),
            Err(GridError::MissingAttribute { attribute: "droop", .. })
        ));
        let mut grid = mixed_grid();
        grid.lines[0].coupling = None;
        assert!(matches!(
            grid_to_vessels(&grid, &UnitMap::IDENTITY),
            Err(GridError::MissingAttribute { attribute: "coupling", .. })
        ));
        let mut grid = mixed_grid();
        grid.sources[1].f_nom_hz = Some(61.0);
        assert_eq!(
            grid_to_vessels(&grid, &UnitMap::IDENTITY),
            Err(GridError::CurveOffNominal("s2".into()))
        );
        let bad_unit = UnitMap {
            watts_per_cm3: 0.0,
            ..UnitMap::IDENTITY
        };
        assert!(grid_to_vessels(&mixed_grid(), &bad_unit).is_err());
    }

    #[test]
    fn rated_source_uses_slope_selection() {
        let grid = GridSpec {
            sources: vec![Source {
                id: "s".into(),
                f_nom_hz: Some(60.0),
                p_ref_w: Some(0.0),
                droop: Some(DroopSpec::Rated {
                    delta_f_hz: 1.0,
                    s_rated_w: 10.0,
                }),
                max_height_cm: None,
            }],
            ..Default::default()
        };
        let net = grid_to_vessels(&grid, &UnitMap::IDENTITY).unwrap();
        assert_relative_eq!(net.vessels()[0].profile.uniform_area().unwrap(), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn interconnected_view_settles_to_one_frequency() {
        let scenario = interconnected_demo(12.0);
        let series = run(&scenario).unwrap();
        let view = vessels_to_grid_view(&series, &scenario.network, &UnitMap::IDENTITY).unwrap();
        let last = view.samples.last().unwrap();
        for f in &last.frequencies_hz {
            assert!((f - 63.0).abs() < 1e-6, "{last:?}");
        }
        // Vessel 2 was asked for 30 and delivers 22.5.
        assert!((last.setpoints[1] - 30.0).abs() < 1e-12);
        assert!((last.tracking_error[1] - 7.5).abs() < 1e-6);
        assert!(last.power_rate.iter().all(|r| r.abs() < 1e-6));
    }

    #[test]
    fn electrical_document_loads() {
        let doc = json!({
            "domain": "electrical",
            "grid": {
                "sources": [
                    {"id": "s1", "f_nom_hz": 60, "p_ref_w": 0, "droop": {"kind": "linear", "m_p": 0.4}},
                    {"id": "s2", "f_nom_hz": 60, "p_ref_w": 0, "droop": {"kind": "rated", "delta_f_hz": 1, "s_rated_w": 2.5}}
                ],
                "buses": [{"id": "bulk", "frequency_hz": 60}],
                "lines": [
                    {"id": "l1", "from": "s1", "to": "s2", "coupling": 3},
                    {"id": "l2", "from": "s2", "to": "bulk", "coupling": 3}
                ]
            },
            "events": [
                {"time_s": 1, "action": "set_setpoint", "source": "s1", "p_ref_w": 10},
                {"time_s": 2, "action": "set_line", "line": "l2", "in_service": false},
                {"time_s": 3, "action": "inject_energy", "source": "s2", "energy_ws": -1},
                {"time_s": 4, "action": "set_bus_frequency", "bus": "bulk", "frequency_hz": 59.9}
            ],
            "duration_s": 5, "timestep_s": 0.01, "sample_interval_s": 0.1
        });
        let s = Scenario::from_value(doc).unwrap();
        assert_eq!(s.network.vessels().len(), 2);
        assert_eq!(
            s.events[0].action,
            Action::SetBaseElevation {
                node: "s1".into(),
                elevation: 4.0
            }
        );
        assert_eq!(s.events[1].action, Action::SetValve { pipe: "l2".into(), open: false });
        assert_eq!(s.events[2].action, Action::InjectVolume { node: "s2".into(), volume: -1.0 });
        assert!(matches!(s.events[3].action, Action::SetTankLevel { level, .. } if (level - 59.9).abs() < 1e-12));

        let unknown = json!({
            "domain": "electrical",
            "grid": {"sources": [{"id": "s1", "f_nom_hz": 60, "p_ref_w": 0, "droop": {"kind": "linear", "m_p": 1}}]},
            "events": [{"time_s": 1, "action": "set_setpoint", "source": "nope", "p_ref_w": 1}],
            "duration_s": 5, "timestep_s": 0.01, "sample_interval_s": 0.1
        });
        let err = Scenario::from_value(unknown).unwrap_err();
        assert!(err.is_semantic());
    }
}
