//! The three demonstration scenarios: a vessel on the bulk grid, four
//! interconnected vessels, and a microgrid that islands.

use thiserror::Error;

use crate::droop::UnitMap;
use crate::network::{InfiniteTank, Network, Pipe, Vessel, NOMINAL_LEVEL};
use crate::scenario::{Action, Event, Scenario};

pub const BUILTIN_NAMES: [&str; 3] = ["grid", "interconnected", "microgrid"];

/// Block height placed under a vessel in the demos, 20 % of the nominal level.
pub const DEFAULT_BLOCK_CM: f64 = 12.0;

/// Pipe conductance used throughout the demos; fast enough that every
/// transient has died out before the next scripted event.
pub const DEMO_CONDUCTANCE: f64 = 5.0;

pub const DEMO_DURATION_S: f64 = 30.0;
pub const DEMO_TIMESTEP_S: f64 = 0.01;
pub const DEMO_SAMPLE_INTERVAL_S: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown builtin scenario '{0}' (expected one of grid, interconnected, microgrid)")]
pub struct UnknownScenario(pub String);

fn scenario(network: Network, events: Vec<Event>) -> Scenario {
    Scenario {
        network,
        events,
        duration: DEMO_DURATION_S,
        timestep: DEMO_TIMESTEP_S,
        sample_interval: DEMO_SAMPLE_INTERVAL_S,
        unit_map: UnitMap::IDENTITY,
    }
}

fn raise(time: f64, node: &str, elevation: f64) -> Event {
    Event::new(
        time,
        Action::SetBaseElevation {
            node: node.into(),
            elevation,
        },
    )
}

/// One vessel (area 2.5) piped to an infinite tank at 60; placed on a block
/// at t = 10 s.
pub fn grid_demo(block: f64) -> Scenario {
    let network = Network::new(
        vec![Vessel::uniform("vessel2", 2.5, NOMINAL_LEVEL)],
        vec![InfiniteTank {
            id: "grid".into(),
            fixed_level: NOMINAL_LEVEL,
        }],
        vec![Pipe::new("p_grid", "vessel2", "grid", DEMO_CONDUCTANCE)],
    );
    scenario(network, vec![raise(10.0, "vessel2", block)])
}

/// Four vessels of areas 1.25, 2.5, 2.5, 3.75 in a ring of equal pipes;
/// vessel 2 is placed on a block at t = 10 s.
pub fn interconnected_demo(block: f64) -> Scenario {
    let vessels = [1.25, 2.5, 2.5, 3.75]
        .iter()
        .enumerate()
        .map(|(i, &a)| Vessel::uniform(format!("vessel{}", i + 1), a, NOMINAL_LEVEL))
        .collect();
    let pipes = [(1, 2), (2, 3), (3, 4), (4, 1)]
        .iter()
        .map(|(a, b)| Pipe::new(format!("p{a}{b}"), format!("vessel{a}"), format!("vessel{b}"), DEMO_CONDUCTANCE))
        .collect();
    scenario(Network::new(vessels, vec![], pipes), vec![raise(10.0, "vessel2", block)])
}

/// Vessel 1 (area 25) stands in for the bulk grid; vessels 2–4 (area 2.5)
/// form the microgrid. Vessel 2 goes on a block at t = 5 s, the pipes to
/// vessel 1 close at t = 10 s, and vessel 4 drops into a hole of the same
/// depth at t = 15 s.
pub fn microgrid_demo(block: f64) -> Scenario {
    let mut vessels = vec![Vessel::uniform("vessel1", 25.0, NOMINAL_LEVEL)];
    vessels.extend((2..=4).map(|k| Vessel::uniform(format!("vessel{k}"), 2.5, NOMINAL_LEVEL)));
    let tie = 10.0 * DEMO_CONDUCTANCE;
    let mut pipes: Vec<Pipe> = (2..=4)
        .map(|k| Pipe::new(format!("p1{k}"), "vessel1", format!("vessel{k}"), tie))
        .collect();
    pipes.extend(
        [(2, 3), (3, 4), (4, 2)]
            .iter()
            .map(|(a, b)| Pipe::new(format!("p{a}{b}"), format!("vessel{a}"), format!("vessel{b}"), DEMO_CONDUCTANCE)),
    );
    let mut events = vec![raise(5.0, "vessel2", block)];
    events.extend((2..=4).map(|k| {
        Event::new(
            10.0,
            Action::SetValve {
                pipe: format!("p1{k}"),
                open: false,
            },
        )
    }));
    events.push(raise(15.0, "vessel4", -block));
    scenario(Network::new(vessels, vec![], pipes), events)
}

pub fn builtin_scenario(name: &str) -> Result<Scenario, UnknownScenario> {
    builtin_scenario_with_block(name, DEFAULT_BLOCK_CM)
}

pub fn builtin_scenario_with_block(name: &str, block: f64) -> Result<Scenario, UnknownScenario> {
    match name {
        "grid" => Ok(grid_demo(block)),
        "interconnected" => Ok(interconnected_demo(block)),
        "microgrid" => Ok(microgrid_demo(block)),
        other => Err(UnknownScenario(other.to_string())),
    }
}
