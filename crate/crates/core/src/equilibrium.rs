//! Steady state of each connected component.
//!
//! A component holding a tank settles at the tank level. A tankless
//! component keeps its water, so it settles at the level `L*` that holds the
//! same total volume: `Σ_k V_k(L* − z_k) = Σ_k V_k(now)`, where `z_k` is the
//! vessel's base elevation. For straight vessels this is the area-weighted
//! mean of the absolute levels, which is proportional load sharing in the
//! droop picture.

use thiserror::Error;

use crate::hydraulics::SimulationState;
use crate::network::{Network, NodeRef};
use crate::profile::{bisect_increasing, AreaProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("no reachable equilibrium: vessel '{vessel}' would sit at {level} cm, outside [0, {max_height}]")]
    Unreachable { vessel: String, level: f64, max_height: f64 },
    #[error("tanks '{a}' and '{b}' hold different levels in one component")]
    ConflictingTanks { a: String, b: String },
    #[error("vessel '{0}' is not straight-walled")]
    NonUniform(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("empty component")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VesselEquilibrium {
    pub id: String,
    pub index: usize,
    pub final_volume: f64,
    /// Final volume minus the volume in the given state.
    pub volume_change: f64,
    /// Water that has left the vessel since t = 0, once settled.
    pub exited_volume: f64,
    /// `A · z − exited`: shortfall of the delivered volume against the
    /// block's volume. Straight vessels only.
    pub tracking_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentEquilibrium {
    pub nodes: Vec<String>,
    pub level: f64,
    pub has_tank: bool,
    pub vessels: Vec<VesselEquilibrium>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EquilibriumResult {
    pub components: Vec<ComponentEquilibrium>,
}

impl EquilibriumResult {
    pub fn vessel(&self, id: &str) -> Option<&VesselEquilibrium> {
        self.components.iter().flat_map(|c| &c.vessels).find(|v| v.id == id)
    }

    pub fn component_of(&self, id: &str) -> Option<&ComponentEquilibrium> {
        self.components.iter().find(|c| c.nodes.iter().any(|n| n == id))
    }
}

/// Closed-form common level of a tankless component of straight vessels:
/// `L* = Σ A_k (z_k + h_k) / Σ A_k`. `None` if the component has a tank or a
/// shaped vessel.
pub fn closed_form_level(net: &Network, state: &SimulationState, component: &[NodeRef]) -> Option<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for &n in component {
        let NodeRef::Vessel(k) = n else { return None };
        let v = &net.vessels()[k];
        let area = v.profile.uniform_area()?;
        num += area * (v.base_elevation + state.levels[k]);
        den += area;
    }
    (den > 0.0).then(|| num / den)
}

fn tank_level(net: &Network, component: &[NodeRef]) -> Result<Option<f64>, EquilibriumError> {
    let mut found: Option<(usize, f64)> = None;
    for &n in component {
        if let NodeRef::Tank(t) = n {
            let level = net.tanks()[t].fixed_level;
            match found {
                Some((first, l)) if l != level => {
                    return Err(EquilibriumError::ConflictingTanks {
                        a: net.tanks()[first].id.clone(),
                        b: net.tanks()[t].id.clone(),
                    })
                }
                Some(_) => {}
                None => found = Some((t, level)),
            }
        }
    }
    Ok(found.map(|(_, l)| l))
}

pub(crate) fn solve_component(
    net: &Network,
    state: &SimulationState,
    component: &[NodeRef],
) -> Result<ComponentEquilibrium, EquilibriumError> {
    if component.is_empty() {
        return Err(EquilibriumError::Empty);
    }
    let vessels: Vec<usize> = component
        .iter()
        .filter_map(|n| match n {
            NodeRef::Vessel(k) => Some(*k),
            NodeRef::Tank(_) => None,
        })
        .collect();
    let tank = tank_level(net, component)?;

    let level = match tank {
        Some(l) => l,
        None => {
            let vs = net.vessels();
            let target: f64 = vessels.iter().map(|&k| state.volumes[k]).sum();
            let held = |level: f64| -> f64 {
                vessels
                    .iter()
                    .map(|&k| {
                        let v = &vs[k];
                        v.profile
                            .volume_extended((level - v.base_elevation).clamp(0.0, v.max_height))
                    })
                    .sum()
            };
            let lo = vessels.iter().map(|&k| vs[k].base_elevation).fold(f64::INFINITY, f64::min);
            let hi = vessels
                .iter()
                .map(|&k| vs[k].base_elevation + vs[k].max_height)
                .fold(f64::NEG_INFINITY, f64::max);
            if target >= held(hi) {
                hi
            } else {
                bisect_increasing(held, target, lo, hi)
            }
        }
    };

    let mut out = Vec::with_capacity(vessels.len());
    for &k in &vessels {
        let v = &net.vessels()[k];
        let h = level - v.base_elevation;
        if !(0.0..=v.max_height).contains(&h) {
            return Err(EquilibriumError::Unreachable {
                vessel: v.id.clone(),
                level: h,
                max_height: v.max_height,
            });
        }
        let final_volume = v.profile.volume_extended(h);
        let exited = state.initial_volumes[k] + state.injected[k] - final_volume;
        out.push(VesselEquilibrium {
            id: v.id.clone(),
            index: k,
            final_volume,
            volume_change: final_volume - state.volumes[k],
            exited_volume: exited,
            tracking_error: v.profile.uniform_area().map(|a| a * v.base_elevation - exited),
        });
    }

    let mut nodes: Vec<String> = component.iter().map(|&n| net.node_id(n).to_string()).collect();
    nodes.sort();
    Ok(ComponentEquilibrium {
        nodes,
        level,
        has_tank: tank.is_some(),
        vessels: out,
    })
}

/// Settled state of the component made of the given node ids, under the
/// current elevations and valve states.
pub fn component_equilibrium<S: AsRef<str>>(
    net: &Network,
    state: &SimulationState,
    component: &[S],
) -> Result<ComponentEquilibrium, EquilibriumError> {
    let refs = component
        .iter()
        .map(|id| net.node(id.as_ref()).ok_or_else(|| EquilibriumError::UnknownNode(id.as_ref().to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    solve_component(net, state, &refs)
}

/// Settled state of every component.
pub fn equilibrium(net: &Network, state: &SimulationState) -> Result<EquilibriumResult, EquilibriumError> {
    let components = net
        .component_refs()
        .iter()
        .map(|c| solve_component(net, state, c))
        .collect::<Result<_, _>>()?;
    Ok(EquilibriumResult { components })
}

/// Share of a displaced volume taken up by each straight vessel:
/// `ΔV_k = A_k / Σ A · displaced`.
pub fn sharing_prediction(profiles: &[AreaProfile], displaced: f64) -> Result<Vec<f64>, EquilibriumError> {
    let areas = profiles
        .iter()
        .enumerate()
        .map(|(i, p)| p.uniform_area().ok_or_else(|| EquilibriumError::NonUniform(format!("#{i}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if areas.is_empty() {
        return Err(EquilibriumError::Empty);
    }
    let total: f64 = areas.iter().sum();
    Ok(areas.iter().map(|a| a / total * displaced).collect())
}

/// Shortfall between a straight vessel's block volume and the water it has
/// delivered at equilibrium.
pub fn tracking_error(vessel: &str, result: &EquilibriumResult) -> Result<f64, EquilibriumError> {
    let v = result
        .vessel(vessel)
        .ok_or_else(|| EquilibriumError::UnknownNode(vessel.to_string()))?;
    v.tracking_error
        .ok_or_else(|| EquilibriumError::NonUniform(vessel.to_string()))
}
