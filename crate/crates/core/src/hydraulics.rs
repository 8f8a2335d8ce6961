//! Water exchange between vessels.
//!
//! Pipe flow is linear in the level difference (laminar regime):
//! `q = g · (L_i − L_j)`. With this law the vessel network is exactly the
//! linear droop network: levels follow consensus dynamics on the pipe graph,
//! weighted by the vessel cross-sections, and settle at the area-weighted
//! common level.

use thiserror::Error;

use crate::network::{Network, NodeRef};
use crate::profile::{volume_from_level, ProfileError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("vessel '{vessel}' overflows at t = {time} s (level {level} cm > max {max} cm)")]
    Overflow {
        vessel: String,
        time: f64,
        level: f64,
        max: f64,
    },
    #[error("vessel '{vessel}' runs dry at t = {time} s (level {level} cm)")]
    Underflow { vessel: String, time: f64, level: f64 },
    #[error("step size must be > 0 (got {0})")]
    NonPositiveStep(f64),
    #[error("vessel '{vessel}': {source}")]
    Profile {
        vessel: String,
        #[source]
        source: ProfileError,
    },
}

/// Vessel volumes at one instant, with the bookkeeping needed to report
/// exited volume (water that has left each vessel, positive outwards).
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub time: f64,
    pub volumes: Vec<f64>,
    /// Water height above each vessel's floor.
    pub levels: Vec<f64>,
    pub initial_volumes: Vec<f64>,
    /// Net volume added by injections so far.
    pub injected: Vec<f64>,
}

impl SimulationState {
    pub fn initial(net: &Network) -> Result<Self, StepError> {
        let volumes = net
            .vessels()
            .iter()
            .map(|v| {
                volume_from_level(&v.profile, v.initial_level).map_err(|source| StepError::Profile {
                    vessel: v.id.clone(),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SimulationState {
            time: 0.0,
            levels: net.vessels().iter().map(|v| v.initial_level).collect(),
            initial_volumes: volumes.clone(),
            injected: vec![0.0; volumes.len()],
            volumes,
        })
    }

    /// `initial + injected − current`.
    pub fn exited(&self, vessel: usize) -> f64 {
        self.initial_volumes[vessel] + self.injected[vessel] - self.volumes[vessel]
    }

    pub fn exited_volumes(&self) -> Vec<f64> {
        (0..self.volumes.len()).map(|k| self.exited(k)).collect()
    }

    pub fn absolute_level(&self, net: &Network, node: NodeRef) -> f64 {
        match node {
            NodeRef::Vessel(k) => net.vessels()[k].base_elevation + self.levels[k],
            NodeRef::Tank(t) => net.tanks()[t].fixed_level,
        }
    }

    /// Absolute level of every node, vessels first.
    pub fn absolute_levels(&self, net: &Network) -> Vec<f64> {
        net.node_refs().map(|n| self.absolute_level(net, n)).collect()
    }

    pub fn total_volume(&self) -> f64 {
        self.volumes.iter().sum()
    }

    /// Adds `volume` (negative to remove) to a vessel.
    pub fn inject(&mut self, net: &Network, vessel: usize, volume: f64) -> Result<(), StepError> {
        self.volumes[vessel] += volume;
        self.injected[vessel] += volume;
        self.refresh_levels(net)
    }

    /// Recomputes levels from volumes and enforces `0 ≤ level ≤ max_height`.
    pub(crate) fn refresh_levels(&mut self, net: &Network) -> Result<(), StepError> {
        for (k, v) in net.vessels().iter().enumerate() {
            let level = v.profile.level_extended(self.volumes[k]);
            self.levels[k] = level;
            if self.volumes[k] < 0.0 {
                return Err(StepError::Underflow {
                    vessel: v.id.clone(),
                    time: self.time,
                    level,
                });
            }
            if level > v.max_height {
                return Err(StepError::Overflow {
                    vessel: v.id.clone(),
                    time: self.time,
                    level,
                    max: v.max_height,
                });
            }
        }
        Ok(())
    }
}

/// Flow from `i` to `j` through one pipe.
pub fn pipe_flow(level_i: f64, level_j: f64, conductance: f64, valve_open: bool) -> f64 {
    if valve_open {
        conductance * (level_i - level_j)
    } else {
        0.0
    }
}

fn absolute_levels_for<'a>(net: &'a Network, volumes: &'a [f64]) -> impl Fn(NodeRef) -> f64 + 'a {
    move |node| match node {
        NodeRef::Vessel(k) => {
            let v = &net.vessels()[k];
            v.base_elevation + v.profile.level_extended(volumes[k])
        }
        NodeRef::Tank(t) => net.tanks()[t].fixed_level,
    }
}

fn rates(net: &Network, volumes: &[f64]) -> Vec<f64> {
    let level = absolute_levels_for(net, volumes);
    let mut dv = vec![0.0; volumes.len()];
    for (i, pipe) in net.pipes().iter().enumerate() {
        let Some((a, b)) = net.endpoints(i) else { continue };
        if !pipe.valve_open {
            continue;
        }
        let q = pipe_flow(level(a), level(b), pipe.conductance, true);
        if let NodeRef::Vessel(k) = a {
            dv[k] -= q;
        }
        if let NodeRef::Vessel(k) = b {
            dv[k] += q;
        }
    }
    dv
}

/// `dV/dt` for every vessel. Tanks are boundary conditions and have no entry.
pub fn derivatives(net: &Network, state: &SimulationState) -> Vec<f64> {
    rates(net, &state.volumes)
}

/// Flow through each pipe, positive from its `from` end to its `to` end.
pub fn pipe_flows(net: &Network, state: &SimulationState) -> Vec<f64> {
    let level = absolute_levels_for(net, &state.volumes);
    net.pipes()
        .iter()
        .enumerate()
        .map(|(i, p)| match net.endpoints(i) {
            Some((a, b)) => pipe_flow(level(a), level(b), p.conductance, p.valve_open),
            None => 0.0,
        })
        .collect()
}

/// One classical fourth-order Runge–Kutta step of size `dt`.
pub fn step(net: &Network, state: &SimulationState, dt: f64) -> Result<SimulationState, StepError> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(StepError::NonPositiveStep(dt));
    }
    let y = &state.volumes;
    let shifted = |k: &[f64], h: f64| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + h * k).collect() };
    let k1 = rates(net, y);
    let k2 = rates(net, &shifted(&k1, 0.5 * dt));
    let k3 = rates(net, &shifted(&k2, 0.5 * dt));
    let k4 = rates(net, &shifted(&k3, dt));
    let volumes = (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    let mut next = SimulationState {
        time: state.time + dt,
        volumes,
        levels: state.levels.clone(),
        initial_volumes: state.initial_volumes.clone(),
        injected: state.injected.clone(),
    };
    next.refresh_levels(net)?;
    Ok(next)
}
