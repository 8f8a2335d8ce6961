use std::collections::HashSet;
use std::fmt;

use crate::network::{Network, NodeRef};
use crate::scenario::{Action, Scenario};

/// One broken rule, naming the entity it concerns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub entity: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entity, self.rule)
    }
}

/// Relative slack when checking that one time is an integer multiple of another.
const GRID_TOL: f64 = 1e-9;

fn is_multiple(x: f64, step: f64) -> bool {
    let n = (x / step).round();
    n >= 1.0 && (x - n * step).abs() <= GRID_TOL * x.abs().max(step)
}

fn target_problem(net: &Network, action: &Action) -> Option<String> {
    let vessel = |id: &str| match net.node(id) {
        Some(NodeRef::Vessel(_)) => None,
        _ => Some(format!("'{id}' is not a vessel")),
    };
    match action {
        Action::SetBaseElevation { node, .. } | Action::InjectVolume { node, .. } => vessel(node),
        Action::SetTankLevel { tank, .. } => match net.node(tank) {
            Some(NodeRef::Tank(_)) => None,
            _ => Some(format!("'{tank}' is not a tank")),
        },
        Action::SetValve { pipe, .. } => net
            .pipe_index(pipe)
            .is_none()
            .then(|| format!("pipe '{pipe}' does not exist")),
    }
}

/// Checks every structural rule of a scenario. An empty result means the
/// scenario can be run.
pub fn validate(scenario: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |entity: String, rule: String| out.push(Violation { entity, rule });
    let net = &scenario.network;

    let mut ids = HashSet::new();
    for id in net.node_ids() {
        if !ids.insert(id) {
            push(format!("node '{id}'"), "duplicate node id".into());
        }
    }

    for v in net.vessels() {
        let entity = format!("vessel '{}'", v.id);
        for msg in v.profile.check() {
            push(entity.clone(), format!("profile: {msg}"));
        }
        if let Some(top) = v.profile.extent() {
            if top < v.max_height {
                push(entity.clone(), format!("profile covers only [0, {top}] but max_height is {}", v.max_height));
            }
        }
        if !(v.max_height.is_finite() && v.max_height > 0.0) {
            push(entity.clone(), format!("max_height must be > 0 (got {})", v.max_height));
        }
        if !(0.0..=v.max_height).contains(&v.initial_level) {
            push(
                entity.clone(),
                format!("initial_level {} outside [0, {}]", v.initial_level, v.max_height),
            );
        }
        if !v.base_elevation.is_finite() {
            push(entity, "base_elevation must be finite".into());
        }
    }

    for t in net.tanks() {
        if !t.fixed_level.is_finite() {
            push(format!("tank '{}'", t.id), "fixed_level must be finite".into());
        }
    }

    let mut pipe_ids = HashSet::new();
    for p in net.pipes() {
        let entity = format!("pipe '{}'", p.id);
        if !pipe_ids.insert(p.id.as_str()) {
            push(entity.clone(), "duplicate pipe id".into());
        }
        if !(p.conductance.is_finite() && p.conductance > 0.0) {
            push(entity.clone(), format!("conductance must be > 0 (got {})", p.conductance));
        }
        if p.from == p.to {
            push(entity.clone(), format!("endpoints must be distinct (both '{}')", p.from));
        }
        for end in [&p.from, &p.to] {
            if net.node(end).is_none() {
                push(entity.clone(), format!("endpoint '{end}' does not exist"));
            }
        }
    }

    let mut last_time = f64::NEG_INFINITY;
    for (i, e) in scenario.events.iter().enumerate() {
        let entity = format!("event {i} ({})", e.action.describe());
        if !(e.time.is_finite() && e.time >= 0.0) {
            push(entity.clone(), format!("time must be >= 0 (got {})", e.time));
        }
        if e.time < last_time {
            push(entity.clone(), format!("events out of order ({} after {last_time})", e.time));
        }
        last_time = last_time.max(e.time);
        if let Some(msg) = target_problem(net, &e.action) {
            push(entity.clone(), msg);
        }
        let value = match &e.action {
            Action::SetBaseElevation { elevation: x, .. }
            | Action::InjectVolume { volume: x, .. }
            | Action::SetTankLevel { level: x, .. } => *x,
            Action::SetValve { .. } => 0.0,
        };
        if !value.is_finite() {
            push(entity, "value must be finite".into());
        }
    }

    let (dur, dt, si) = (scenario.duration, scenario.timestep, scenario.sample_interval);
    if !(dur.is_finite() && dur > 0.0) {
        push("scenario".into(), format!("duration must be > 0 (got {dur})"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        push("scenario".into(), format!("timestep must be > 0 (got {dt})"));
    } else {
        if !(dt <= si && si <= dur) {
            push(
                "scenario".into(),
                format!("need timestep <= sample_interval <= duration (got {dt}, {si}, {dur})"),
            );
        } else {
            if !is_multiple(si, dt) {
                push("scenario".into(), format!("sample_interval {si} is not a multiple of timestep {dt}"));
            }
            if !is_multiple(dur, dt) {
                push("scenario".into(), format!("duration {dur} is not a multiple of timestep {dt}"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Pipe, Vessel};
    use crate::scenario::Event;

    fn base() -> Scenario {
        Scenario {
            network: Network::new(
                vec![Vessel::uniform("a", 1.0, 60.0), Vessel::uniform("b", 2.0, 60.0)],
                vec![],
                vec![Pipe::new("p", "a", "b", 1.0)],
            ),
            events: vec![],
            duration: 10.0,
            timestep: 0.01,
            sample_interval: 0.1,
            unit_map: Default::default(),
        }
    }

    #[test]
    fn valid_scenario_passes() {
        assert!(validate(&base()).is_empty());
    }

    #[test]
    fn zero_conductance_names_pipe() {
        let mut s = base();
        s.network = Network::new(s.network.vessels().to_vec(), vec![], vec![Pipe::new("p", "a", "b", 0.0)]);
        let v = validate(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].entity, "pipe 'p'");
    }

    #[test]
    fn overfull_vessel() {
        let mut s = base();
        let mut vs = s.network.vessels().to_vec();
        vs[0].initial_level = vs[0].max_height + 1.0;
        s.network = Network::new(vs, vec![], s.network.pipes().to_vec());
        let v = validate(&s);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].entity, "vessel 'a'");
    }

    #[test]
    fn structural_problems() {
        let mut s = base();
        s.network = Network::new(
            vec![Vessel::uniform("a", 1.0, 60.0), Vessel::uniform("a", 1.0, 60.0)],
            vec![],
            vec![Pipe::new("p", "a", "a", 1.0), Pipe::new("q", "a", "zz", 1.0)],
        );
        let rules: Vec<String> = validate(&s).into_iter().map(|v| v.to_string()).collect();
        assert!(rules.iter().any(|r| r.contains("duplicate node id")));
        assert!(rules.iter().any(|r| r.contains("distinct")));
        assert!(rules.iter().any(|r| r.contains("'zz' does not exist")));
    }

    #[test]
    fn event_problems() {
        let mut s = base();
        s.events = vec![
            Event::new(5.0, Action::SetValve { pipe: "nope".into(), open: false }),
            Event::new(1.0, Action::InjectVolume { node: "a".into(), volume: 1.0 }),
            Event::new(-1.0, Action::SetTankLevel { tank: "a".into(), level: 1.0 }),
        ];
        let v = validate(&s);
        assert_eq!(v.len(), 5, "{v:?}");
    }

    #[test]
    fn timing_rules() {
        let mut s = base();
        s.sample_interval = 0.015;
        assert_eq!(validate(&s).len(), 1);
        s.sample_interval = 20.0;
        assert_eq!(validate(&s).len(), 1);
        s.sample_interval = 0.1;
        s.duration = 0.0;
        assert!(!validate(&s).is_empty());
    }
}
