//! Planar agent state and bi-agent relative geometry.

use alloc::vec::Vec;

use crate::math::{self, PI, TAU};

/// Pose and speed of one unicycle agent.
///
/// `omega` is the turn rate commanded on the previous step; neighbors read it
/// as the agent's rotation rate when evaluating optic flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub v: f64,
    pub omega: f64,
}

impl AgentState {
    pub fn new(x: f64, y: f64, theta: f64, v: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
            v,
            omega: 0.0,
        }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    /// World-frame velocity `(v cos θ, v sin θ)`.
    #[inline]
    pub fn velocity(&self) -> (f64, f64) {
        (
            self.v * math::cos(self.theta),
            self.v * math::sin(self.theta),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite()
            && self.y.is_finite()
            && self.theta.is_finite()
            && self.v.is_finite()
            && self.omega.is_finite()
    }
}

/// All agents at one instant. Agent indices are stable for a whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub t: f64,
    pub agents: Vec<AgentState>,
}

impl SwarmState {
    pub fn new(t: f64, agents: Vec<AgentState>) -> Self {
        Self { t, agents }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn headings(&self) -> impl Iterator<Item = f64> + '_ {
        self.agents.iter().map(|a| a.theta)
    }

    /// Sum of world-frame velocity vectors.
    pub fn momentum(&self) -> (f64, f64) {
        self.agents.iter().fold((0.0, 0.0), |(sx, sy), a| {
            let (vx, vy) = a.velocity();
            (sx + vx, sy + vy)
        })
    }
}

/// Geometry of a target as seen from a viewer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeGeometry {
    /// Separation distance.
    pub r: f64,
    /// Absolute line-of-sight angle from viewer to target.
    pub theta_t: f64,
    /// Body-relative bearing of the target seen by the viewer.
    pub gamma_a: f64,
    /// `π + θ_b − θ_t`: the target's heading measured against the reversed
    /// line of sight.
    pub gamma_b: f64,
}

/// Wraps an angle into `(−π, π]`.
///
/// Panics on non-finite input.
pub fn wrap_angle(a: f64) -> f64 {
    assert!(a.is_finite(), "wrap_angle: non-finite angle {a}");
    if a > -PI && a <= PI {
        return a;
    }
    let mut w = a - TAU * math::floor((a + PI) / TAU);
    // floor puts w in [−π, π); shift the lower boundary onto the closed end.
    if w <= -PI {
        w += TAU;
    }
    if w > PI {
        w -= TAU;
    }
    w
}

/// Relative geometry of `target` seen from `viewer`.
///
/// Coincident positions give `r = 0` and `theta_t = atan2(0, 0) = 0`.
pub fn relative_geometry(viewer: &AgentState, target: &AgentState) -> RelativeGeometry {
    let dx = target.x - viewer.x;
    let dy = target.y - viewer.y;
    let theta_t = math::atan2(dy, dx);
    RelativeGeometry {
        r: math::hypot(dx, dy),
        theta_t,
        gamma_a: wrap_angle(theta_t - viewer.theta),
        gamma_b: wrap_angle(PI + target.theta - theta_t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn wrap_examples() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert_abs_diff_eq!(wrap_angle(3.0 * PI), PI, epsilon = 1e-12);
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle(PI), PI);
        assert_abs_diff_eq!(wrap_angle(-3.0 * PI), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_angle(TAU + 0.25), 0.25, epsilon = 1e-12);
    }

    #[test]
    #[should_panic]
    fn wrap_rejects_nan() {
        wrap_angle(f64::NAN);
    }

    #[test]
    fn three_four_five() {
        let a = AgentState::new(0.0, 0.0, 0.0, 1.0);
        let b = AgentState::new(3.0, 4.0, 0.0, 1.0);
        let g = relative_geometry(&a, &b);
        assert_eq!(g.r, 5.0);
        assert_eq!(g.theta_t, libm::atan2(4.0, 3.0));
    }

    #[test]
    fn dead_ahead() {
        let a = AgentState::new(0.0, 0.0, PI / 2.0, 1.0);
        let b = AgentState::new(0.0, 1.0, 0.0, 1.0);
        assert_abs_diff_eq!(relative_geometry(&a, &b).gamma_a, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn gamma_b_boundary() {
        let a = AgentState::new(0.0, 0.0, 0.0, 1.0);
        let b = AgentState::new(1.0, 0.0, 0.0, 1.0);
        assert_eq!(relative_geometry(&a, &b).gamma_b, PI);
    }

    #[test]
    fn coincident_positions() {
        let a = AgentState::new(1.0, 1.0, 0.3, 1.0);
        let g = relative_geometry(&a, &a);
        assert_eq!(g.r, 0.0);
        assert!(g.gamma_a.is_finite());
    }

    proptest! {
        #[test]
        fn wrap_is_idempotent_and_congruent(a in -1e4f64..1e4) {
            let w = wrap_angle(a);
            prop_assert!(w > -PI && w <= PI);
            prop_assert_eq!(wrap_angle(w), w);
            let k = ((a - w) / TAU).round();
            prop_assert!((a - w - k * TAU).abs() < 1e-9);
        }

        #[test]
        fn distance_symmetric_and_los_reversed(
            xa in -10.0f64..10.0, ya in -10.0f64..10.0, ta in -4.0f64..4.0,
            xb in -10.0f64..10.0, yb in -10.0f64..10.0, tb in -4.0f64..4.0,
        ) {
            let a = AgentState::new(xa, ya, ta, 1.0);
            let b = AgentState::new(xb, yb, tb, 1.0);
            prop_assume!((xa - xb).abs() + (ya - yb).abs() > 1e-9);
            let ab = relative_geometry(&a, &b);
            let ba = relative_geometry(&b, &a);
            prop_assert_eq!(ab.r, ba.r);
            let diff = wrap_angle(ab.theta_t - wrap_angle(ba.theta_t + PI));
            prop_assert!(diff.abs() < 1e-12);
        }
    }
}
