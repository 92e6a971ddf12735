//! Deterministic multi-agent swarm simulation core.
//!
//! Agents are planar unicycles with constant forward speed. In the
//! small-target motion reactive (STMR) model each agent senses the planar
//! optic flow produced by every neighbor, picks the neighbor producing the
//! largest flow magnitude, and steers against that single target. Target
//! changes are rate-limited by an average-dwell-time supervisor.
//!
//! Vicsek, Cucker-Smale and a first-harmonic wide-field-integration model are
//! provided as baselines, together with the graph and order statistics used
//! to compare them.
//!
//! The crate is `no_std` (it needs `alloc`); file formats and the command
//! line live in `stmr-sim`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod controllers;
pub mod engine;
mod error;
pub mod flow;
pub mod geometry;
pub mod math;
pub mod supervisor;

pub use error::ConfigError;
pub use geometry::{AgentState, RelativeGeometry, SwarmState};
