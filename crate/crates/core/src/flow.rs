//! Idealized planar optic flow and the small-target motion detector (STMD)
//! peak sensor.
//!
//! The detector is modeled as a max/argmax over the optic-flow magnitudes
//! produced by each neighbor, evaluated at that neighbor's bearing.

use alloc::vec::Vec;

use crate::error::ConfigError;
use crate::geometry::{relative_geometry, AgentState, SwarmState};
use crate::math;

/// Default clamp for the nearness singularity, roughly one robot body radius.
pub const DEFAULT_R_MIN: f64 = 0.05;

/// Optic flow produced by one neighbor on the viewer's retina.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub neighbor_id: usize,
    /// Bearing of the neighbor in the viewer's body frame, `(−π, π]`.
    pub gamma: f64,
    /// Signed flow rate.
    pub qdot: f64,
    pub magnitude: f64,
}

/// Output of the peak detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StmdOutput {
    /// Largest flow magnitude over all neighbors.
    pub peak_magnitude: f64,
    /// Bearing at which the peak occurs.
    pub peak_azimuth: f64,
    /// Neighbor producing the peak.
    pub target_id: usize,
}

/// Inverse range with the singularity at `r = 0` clamped by `r_min`.
#[inline]
pub fn nearness(r: f64, r_min: f64) -> f64 {
    debug_assert!(r_min > 0.0);
    1.0 / r.max(r_min)
}

/// Planar optic flow of `target` seen by `viewer` at body azimuth `gamma`:
///
/// `Q̇ = −θ̇_a − μ θ̇_b + μ [(ẋ_b − ẋ_a) sin γ − (ẏ_b − ẏ_a) cos γ]`
///
/// Velocities are world-frame components while `gamma` is the body-frame
/// bearing, exactly as the flow model is stated. Both rotation rates come
/// from the agents' last commanded `omega`.
pub fn pairwise_flow(viewer: &AgentState, target: &AgentState, gamma: f64, r_min: f64) -> f64 {
    let r = math::hypot(target.x - viewer.x, target.y - viewer.y);
    let mu = nearness(r, r_min);
    let (vxa, vya) = viewer.velocity();
    let (vxb, vyb) = target.velocity();
    let (dvx, dvy) = (vxb - vxa, vyb - vya);
    flow_terms(viewer.omega, target.omega, mu, dvx, dvy, gamma)
}

#[inline]
fn flow_terms(omega_a: f64, omega_b: f64, mu: f64, dvx: f64, dvy: f64, gamma: f64) -> f64 {
    -omega_a - mu * omega_b + mu * (dvx * math::sin(gamma) - dvy * math::cos(gamma))
}

/// Flow samples from every neighbor of `viewer_id`, in index order.
pub fn flow_samples(swarm: &SwarmState, viewer_id: usize, r_min: f64) -> Vec<FlowSample> {
    let viewer = &swarm.agents[viewer_id];
    swarm
        .agents
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != viewer_id)
        .map(|(j, target)| {
            let gamma = relative_geometry(viewer, target).gamma_a;
            let qdot = pairwise_flow(viewer, target, gamma, r_min);
            FlowSample {
                neighbor_id: j,
                gamma,
                qdot,
                magnitude: qdot.abs(),
            }
        })
        .collect()
}

/// Peak of a set of flow samples. Ties go to the lowest neighbor index.
pub fn peak(samples: &[FlowSample]) -> Option<StmdOutput> {
    let mut best: Option<&FlowSample> = None;
    for s in samples {
        match best {
            Some(b) if s.magnitude < b.magnitude => {}
            Some(b) if s.magnitude == b.magnitude && s.neighbor_id >= b.neighbor_id => {}
            _ => best = Some(s),
        }
    }
    best.map(|s| StmdOutput {
        peak_magnitude: s.magnitude,
        peak_azimuth: s.gamma,
        target_id: s.neighbor_id,
    })
}

/// Max/argmax of flow magnitude over the neighbors of `viewer_id`.
pub fn stmd_sense(
    swarm: &SwarmState,
    viewer_id: usize,
    r_min: f64,
) -> Result<StmdOutput, ConfigError> {
    if swarm.len() < 2 {
        return Err(ConfigError::TooFewAgents(swarm.len()));
    }
    let samples = flow_samples(swarm, viewer_id, r_min);
    // Samples are non-empty because N >= 2.
    Ok(peak(&samples).expect("at least one neighbor"))
}
