//! Communicating vessels as a working model of droop-controlled power grids.
//!
//! A network of vessels joined by pipes behaves like grid-forming sources
//! joined by lines: water level plays frequency, cross-section plays the
//! inverse droop slope, the volume that has left a vessel plays delivered
//! power, and the block a vessel stands on plays its power setpoint.
//!
//! The crate simulates such networks ([`engine`]), predicts where they settle
//! ([`equilibrium`]), translates between the two domains ([`droop`], [`grid`])
//! and runs live interactive sessions ([`session`]).

pub mod builtin;
pub mod droop;
pub mod engine;
pub mod equilibrium;
pub mod grid;
pub mod hydraulics;
pub mod network;
pub mod profile;
pub mod scenario;
pub mod session;
pub mod validate;

pub use builtin::{builtin_scenario, BUILTIN_NAMES};
pub use droop::{DroopCurve, DroopError, UnitMap};
pub use engine::{export_csv, export_markers, run, run_with_engine, Domain, Engine, RunError, Sample, TimeSeries};
pub use equilibrium::{equilibrium, EquilibriumError, EquilibriumResult};
pub use grid::{grid_to_vessels, vessels_to_grid, GridError, GridSpec};
pub use hydraulics::{step, SimulationState, StepError};
pub use network::{InfiniteTank, Network, NetworkError, NodeRef, Pipe, Vessel};
pub use profile::AreaProfile;
pub use scenario::{Action, Event, LoadError, Scenario};
pub use session::{ServerMessage, Session, SessionCommand, SessionFrame};
pub use validate::{validate, Violation};
