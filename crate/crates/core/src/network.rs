//! The vessel network: vessels (grid-forming sources), infinite tanks (the
//! bulk grid) and pipes (lines) with valves.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::profile::AreaProfile;

pub const DEFAULT_MAX_HEIGHT: f64 = 120.0;
pub const DEFAULT_CONDUCTANCE: f64 = 1.0;
pub const NOMINAL_LEVEL: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("'{0}' is not a vessel")]
    NotAVessel(String),
    #[error("'{0}' is not a tank")]
    NotATank(String),
    #[error("unknown pipe '{0}'")]
    UnknownPipe(String),
    #[error("no valve state given for pipe '{0}'")]
    MissingValveState(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vessel {
    pub id: String,
    pub profile: AreaProfile,
    /// Height of the block the vessel stands on (negative: sunk into a hole).
    pub base_elevation: f64,
    /// Water height above the vessel floor at t = 0.
    pub initial_level: f64,
    pub max_height: f64,
}

impl Vessel {
    pub fn uniform(id: impl Into<String>, area: f64, initial_level: f64) -> Self {
        Vessel {
            id: id.into(),
            profile: AreaProfile::uniform(area),
            base_elevation: 0.0,
            initial_level,
            max_height: DEFAULT_MAX_HEIGHT,
        }
    }

    pub fn with_base(mut self, base_elevation: f64) -> Self {
        self.base_elevation = base_elevation;
        self
    }

    /// Volume held when full.
    pub fn capacity(&self) -> f64 {
        self.profile.volume_extended(self.max_height)
    }
}

/// Boundary node whose level never moves, whatever flows in or out.
#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteTank {
    pub id: String,
    pub fixed_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pipe {
    pub id: String,
    pub from: String,
    pub to: String,
    /// Flow in cm³/s per cm of level difference.
    pub conductance: f64,
    pub valve_open: bool,
}

impl Pipe {
    pub fn new(id: impl Into<String>, from: impl Into<String>, to: impl Into<String>, conductance: f64) -> Self {
        Pipe {
            id: id.into(),
            from: from.into(),
            to: to.into(),
            conductance,
            valve_open: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeRef {
    Vessel(usize),
    Tank(usize),
}

/// Vessels, tanks and pipes with an id index.
///
/// Parallel pipes between the same pair of nodes are kept separately so each
/// keeps its own valve; with the linear flow law they act as one pipe whose
/// conductance is the sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    vessels: Vec<Vessel>,
    tanks: Vec<InfiniteTank>,
    pipes: Vec<Pipe>,
    nodes: HashMap<String, NodeRef>,
    pipe_ids: HashMap<String, usize>,
    endpoints: Vec<Option<(NodeRef, NodeRef)>>,
}

impl Network {
    /// Builds the network and its index. Does not validate; duplicate ids
    /// resolve to their first occurrence and pipes with unknown endpoints are
    /// inert until fixed. Use [`crate::validate`] to report such problems.
    pub fn new(vessels: Vec<Vessel>, tanks: Vec<InfiniteTank>, pipes: Vec<Pipe>) -> Self {
        let mut nodes = HashMap::new();
        for (i, v) in vessels.iter().enumerate() {
            nodes.entry(v.id.clone()).or_insert(NodeRef::Vessel(i));
        }
        for (i, t) in tanks.iter().enumerate() {
            nodes.entry(t.id.clone()).or_insert(NodeRef::Tank(i));
        }
        let mut pipe_ids = HashMap::new();
        for (i, p) in pipes.iter().enumerate() {
            pipe_ids.entry(p.id.clone()).or_insert(i);
        }
        let endpoints = pipes
            .iter()
            .map(|p| Some((*nodes.get(&p.from)?, *nodes.get(&p.to)?)))
            .collect();
        Network {
            vessels,
            tanks,
            pipes,
            nodes,
            pipe_ids,
            endpoints,
        }
    }

    pub fn vessels(&self) -> &[Vessel] {
        &self.vessels
    }

    pub fn tanks(&self) -> &[InfiniteTank] {
        &self.tanks
    }

    pub fn pipes(&self) -> &[Pipe] {
        &self.pipes
    }

    pub fn node(&self, id: &str) -> Option<NodeRef> {
        self.nodes.get(id).copied()
    }

    pub fn pipe_index(&self, id: &str) -> Option<usize> {
        self.pipe_ids.get(id).copied()
    }

    pub fn vessel_index(&self, id: &str) -> Result<usize, NetworkError> {
        match self.node(id) {
            Some(NodeRef::Vessel(i)) => Ok(i),
            Some(NodeRef::Tank(_)) => Err(NetworkError::NotAVessel(id.to_string())),
            None => Err(NetworkError::UnknownNode(id.to_string())),
        }
    }

    pub fn tank_index(&self, id: &str) -> Result<usize, NetworkError> {
        match self.node(id) {
            Some(NodeRef::Tank(i)) => Ok(i),
            Some(NodeRef::Vessel(_)) => Err(NetworkError::NotATank(id.to_string())),
            None => Err(NetworkError::UnknownNode(id.to_string())),
        }
    }

    pub fn node_id(&self, node: NodeRef) -> &str {
        match node {
            NodeRef::Vessel(i) => &self.vessels[i].id,
            NodeRef::Tank(i) => &self.tanks[i].id,
        }
    }

    /// All node ids, vessels first, in declaration order.
    pub fn node_ids(&self) -> Vec<&str> {
        self.vessels
            .iter()
            .map(|v| v.id.as_str())
            .chain(self.tanks.iter().map(|t| t.id.as_str()))
            .collect()
    }

    pub fn node_refs(&self) -> impl Iterator<Item = NodeRef> + '_ {
        (0..self.vessels.len())
            .map(NodeRef::Vessel)
            .chain((0..self.tanks.len()).map(NodeRef::Tank))
    }

    /// Resolved endpoints of pipe `i`, or `None` if either end is unknown.
    pub fn endpoints(&self, i: usize) -> Option<(NodeRef, NodeRef)> {
        self.endpoints[i]
    }

    pub fn set_base_elevation_at(&mut self, vessel: usize, elevation: f64) {
        self.vessels[vessel].base_elevation = elevation;
    }

    pub fn set_valve_at(&mut self, pipe: usize, open: bool) {
        self.pipes[pipe].valve_open = open;
    }

    pub fn set_tank_level_at(&mut self, tank: usize, level: f64) {
        self.tanks[tank].fixed_level = level;
    }

    pub fn set_base_elevation(&mut self, id: &str, elevation: f64) -> Result<(), NetworkError> {
        let i = self.vessel_index(id)?;
        self.set_base_elevation_at(i, elevation);
        Ok(())
    }

    pub fn set_valve(&mut self, id: &str, open: bool) -> Result<(), NetworkError> {
        let i = self
            .pipe_index(id)
            .ok_or_else(|| NetworkError::UnknownPipe(id.to_string()))?;
        self.set_valve_at(i, open);
        Ok(())
    }

    pub fn set_tank_level(&mut self, id: &str, level: f64) -> Result<(), NetworkError> {
        let i = self.tank_index(id)?;
        self.set_tank_level_at(i, level);
        Ok(())
    }

    pub fn valve_states(&self) -> HashMap<String, bool> {
        self.pipes.iter().map(|p| (p.id.clone(), p.valve_open)).collect()
    }

    /// Connected components over currently open pipes.
    pub fn component_refs(&self) -> Vec<Vec<NodeRef>> {
        let open: Vec<bool> = self.pipes.iter().map(|p| p.valve_open).collect();
        self.partition(&open)
    }

    fn flat(&self, node: NodeRef) -> usize {
        match node {
            NodeRef::Vessel(i) => i,
            NodeRef::Tank(i) => self.vessels.len() + i,
        }
    }

    fn partition(&self, open: &[bool]) -> Vec<Vec<NodeRef>> {
        let all: Vec<NodeRef> = self.node_refs().collect();
        let mut uf = UnionFind::new(all.len());
        for (i, &is_open) in open.iter().enumerate() {
            if let (true, Some((a, b))) = (is_open, self.endpoints[i]) {
                uf.union(self.flat(a), self.flat(b));
            }
        }
        let mut groups: HashMap<usize, Vec<NodeRef>> = HashMap::new();
        for &n in &all {
            groups.entry(uf.find(self.flat(n))).or_default().push(n);
        }
        let mut out: Vec<Vec<NodeRef>> = groups.into_values().collect();
        for g in &mut out {
            g.sort_by(|a, b| self.node_id(*a).cmp(self.node_id(*b)));
        }
        out.sort_by(|a, b| self.node_id(a[0]).cmp(self.node_id(b[0])));
        out
    }
}

/// Partitions the node ids into connected components using only pipes whose
/// valve is open in `valve_states`.
///
/// Ids inside a component are sorted, and components are ordered by their
/// smallest id.
pub fn components(network: &Network, valve_states: &HashMap<String, bool>) -> Result<Vec<Vec<String>>, NetworkError> {
    if let Some(unknown) = valve_states.keys().find(|id| network.pipe_index(id).is_none()) {
        return Err(NetworkError::UnknownPipe(unknown.clone()));
    }
    let open = network
        .pipes
        .iter()
        .map(|p| {
            valve_states
                .get(&p.id)
                .copied()
                .ok_or_else(|| NetworkError::MissingValveState(p.id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(network
        .partition(&open)
        .into_iter()
        .map(|g| g.into_iter().map(|n| network.node_id(n).to_string()).collect())
        .collect())
}
