//! Steering laws: STMR pure pursuit and motion camouflage, plus the Vicsek,
//! Cucker-Smale and first-harmonic wide-field-integration baselines.

use rand_chacha::rand_core::RngCore;

use crate::error::{check_nonnegative, check_positive, ConfigError};
use crate::flow::{flow_samples, nearness, StmdOutput};
use crate::geometry::{relative_geometry, wrap_angle, AgentState, SwarmState};
use crate::math::{self, PI, TAU};

/// Turn-rate saturation of the reference differential-drive robot.
pub const DEFAULT_OMEGA_MAX: f64 = 2.84;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ControllerKind {
    StmrPurePursuit,
    StmrMotionCamouflage,
    Vicsek,
    CuckerSmale,
    Wfi,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 5] = [
        ControllerKind::StmrPurePursuit,
        ControllerKind::StmrMotionCamouflage,
        ControllerKind::Vicsek,
        ControllerKind::CuckerSmale,
        ControllerKind::Wfi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ControllerKind::StmrPurePursuit => "stmr_pure_pursuit",
            ControllerKind::StmrMotionCamouflage => "stmr_motion_camouflage",
            ControllerKind::Vicsek => "vicsek",
            ControllerKind::CuckerSmale => "cucker_smale",
            ControllerKind::Wfi => "wfi",
        }
    }

    /// Accepts the canonical names plus the short aliases `stmr`, `stmr_pp`,
    /// `stmr_mc`, `cs`.
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "stmr" | "stmr_pp" | "stmr_pure_pursuit" => ControllerKind::StmrPurePursuit,
            "stmr_mc" | "stmr_motion_camouflage" => ControllerKind::StmrMotionCamouflage,
            "vicsek" => ControllerKind::Vicsek,
            "cs" | "cucker_smale" => ControllerKind::CuckerSmale,
            "wfi" => ControllerKind::Wfi,
            _ => return None,
        })
    }

    /// Whether the model tracks a single switched target.
    pub fn is_stmr(self) -> bool {
        matches!(
            self,
            ControllerKind::StmrPurePursuit | ControllerKind::StmrMotionCamouflage
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ControllerConfig {
    pub kind: ControllerKind,
    #[cfg_attr(feature = "serde", serde(default = "defaults::gain_k"))]
    pub gain_k: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::omega_max"))]
    pub omega_max: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::vicsek_radius"))]
    pub vicsek_radius: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::vicsek_noise_eta"))]
    pub vicsek_noise_eta: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::cs_strength"))]
    pub cs_strength: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::cs_beta"))]
    pub cs_beta: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::wfi_samples"))]
    pub wfi_samples: usize,
}

mod defaults {
    pub fn gain_k() -> f64 {
        0.1
    }
    pub fn omega_max() -> f64 {
        super::DEFAULT_OMEGA_MAX
    }
    pub fn vicsek_radius() -> f64 {
        1.0
    }
    pub fn vicsek_noise_eta() -> f64 {
        0.1
    }
    pub fn cs_strength() -> f64 {
        1.0
    }
    pub fn cs_beta() -> f64 {
        0.5
    }
    pub fn wfi_samples() -> usize {
        36
    }
}

impl ControllerConfig {
    pub fn new(kind: ControllerKind) -> Self {
        Self {
            kind,
            gain_k: defaults::gain_k(),
            omega_max: defaults::omega_max(),
            vicsek_radius: defaults::vicsek_radius(),
            vicsek_noise_eta: defaults::vicsek_noise_eta(),
            cs_strength: defaults::cs_strength(),
            cs_beta: defaults::cs_beta(),
            wfi_samples: defaults::wfi_samples(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_positive("gain_k", self.gain_k)?;
        check_positive("omega_max", self.omega_max)?;
        check_positive("vicsek_radius", self.vicsek_radius)?;
        check_nonnegative("vicsek_noise_eta", self.vicsek_noise_eta)?;
        check_nonnegative("cs_strength", self.cs_strength)?;
        check_nonnegative("cs_beta", self.cs_beta)?;
        if self.wfi_samples < 8 {
            return Err(ConfigError::TooFewWfiSamples(self.wfi_samples));
        }
        Ok(())
    }
}

/// Proportional bearing law `ω = K γ`, saturated at `omega_max`.
pub fn pure_pursuit(sense: &StmdOutput, gain_k: f64, omega_max: f64) -> f64 {
    math::clamp_abs(gain_k * sense.peak_azimuth, omega_max)
}

/// Rotation rate of the line of sight from `viewer` to `target`, with the
/// range clamped at `r_min`.
///
/// This is `(d × w) μ²` for separation `d` and relative velocity
/// `w = v_b − v_a`; positive means the target drifts counter-clockwise.
pub fn los_rate(viewer: &AgentState, target: &AgentState, r_min: f64) -> f64 {
    let geom = relative_geometry(viewer, target);
    let mu = nearness(geom.r, r_min);
    let (vxa, vya) = viewer.velocity();
    let (vxb, vyb) = target.velocity();
    let (c, s) = (math::cos(geom.theta_t), math::sin(geom.theta_t));
    mu * (c * (vyb - vya) - s * (vxb - vxa))
}

/// Motion camouflage as line-of-sight rate regulation.
///
/// The two-body range-rate form `(1/r)(v_a sin(θ_a − θ_t) + v_b sin(θ_t − θ_b))`
/// evaluated with the viewer-to-target line of sight equals the negated LOS
/// rate, so `ω = −K · that = K · los_rate`. Turning with the LOS rotation
/// drives the rate toward zero.
pub fn motion_camouflage(
    viewer: &AgentState,
    target: &AgentState,
    gain_k: f64,
    r_min: f64,
    omega_max: f64,
) -> f64 {
    let geom = relative_geometry(viewer, target);
    let mu = nearness(geom.r, r_min);
    let theta_dot = mu
        * (viewer.v * math::sin(viewer.theta - geom.theta_t)
            + target.v * math::sin(geom.theta_t - target.theta));
    math::clamp_abs(-gain_k * theta_dot, omega_max)
}

/// Uniform draw on `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Vicsek heading: circular mean over every agent within `radius` (including
/// agent `i`) plus uniform noise on `[−η/2, η/2]`.
///
/// One random number is drawn per call, even when `eta == 0`.
pub fn vicsek_heading<R: RngCore>(
    swarm: &SwarmState,
    i: usize,
    radius: f64,
    eta: f64,
    rng: &mut R,
) -> f64 {
    let me = &swarm.agents[i];
    let (mut ss, mut sc) = (0.0, 0.0);
    for (j, other) in swarm.agents.iter().enumerate() {
        let inside = j == i || math::hypot(other.x - me.x, other.y - me.y) <= radius;
        if inside {
            ss += math::sin(other.theta);
            sc += math::cos(other.theta);
        }
    }
    let xi = (unit_uniform(rng) - 0.5) * eta;
    wrap_angle(math::atan2(ss, sc) + xi)
}

/// Cucker-Smale communication weight `ψ(r) = (1 + r²)^−β`.
#[inline]
pub fn cs_weight(r: f64, beta: f64) -> f64 {
    1.0 / math::pow(1.0 + r * r, beta)
}

/// Cucker-Smale velocity alignment:
/// `a_i = (K/N) Σ_{j≠i} ψ(r_ij) (v_j − v_i)`.
pub fn cucker_smale_accel(swarm: &SwarmState, i: usize, strength: f64, beta: f64) -> (f64, f64) {
    let velocities: alloc::vec::Vec<(f64, f64)> =
        swarm.agents.iter().map(AgentState::velocity).collect();
    cucker_smale_accel_with(swarm, &velocities, i, strength, beta)
}

/// Same as [`cucker_smale_accel`] with velocities supplied separately, so
/// the engine can integrate velocity vectors without round-tripping through
/// `(v, θ)`.
pub fn cucker_smale_accel_with(
    swarm: &SwarmState,
    velocities: &[(f64, f64)],
    i: usize,
    strength: f64,
    beta: f64,
) -> (f64, f64) {
    let n = swarm.len() as f64;
    let me = &swarm.agents[i];
    let (vxi, vyi) = velocities[i];
    let (mut ax, mut ay) = (0.0, 0.0);
    for (j, other) in swarm.agents.iter().enumerate() {
        if j == i {
            continue;
        }
        let psi = cs_weight(math::hypot(other.x - me.x, other.y - me.y), beta);
        let (vxj, vyj) = velocities[j];
        ax += psi * (vxj - vxi);
        ay += psi * (vyj - vyi);
    }
    (strength / n * ax, strength / n * ay)
}

/// Simplified wide-field integration: neighbor flows are binned onto an
/// azimuthal ring and projected onto the first sine harmonic,
/// `ω = K (1/π) ∫ Q̇(γ) sin γ dγ`, by the midpoint rule.
pub fn wfi_feedback(
    swarm: &SwarmState,
    i: usize,
    gain_k: f64,
    r_min: f64,
    n_samples: usize,
    omega_max: f64,
) -> f64 {
    let mut ring = alloc::vec![0.0; n_samples];
    for s in flow_samples(swarm, i, r_min) {
        ring[ring_bin(s.gamma, n_samples)] += s.qdot;
    }
    math::clamp_abs(gain_k * wfi_projection(&ring), omega_max)
}

/// Bin of `gamma` on a ring of `n` equal bins starting at `−π`.
pub fn ring_bin(gamma: f64, n: usize) -> usize {
    let idx = math::floor((gamma + PI) / TAU * n as f64) as isize;
    idx.clamp(0, n as isize - 1) as usize
}

/// `(1/π) Σ_k ring[k] sin(γ_k) Δγ` with `γ_k` the bin midpoints.
pub fn wfi_projection(ring: &[f64]) -> f64 {
    let n = ring.len();
    let width = TAU / n as f64;
    let sum: f64 = ring
        .iter()
        .enumerate()
        .map(|(k, q)| q * math::sin(-PI + (k as f64 + 0.5) * width))
        .sum();
    sum * width / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn peak(az: f64) -> StmdOutput {
        StmdOutput {
            peak_magnitude: 1.0,
            peak_azimuth: az,
            target_id: 1,
        }
    }

    #[test]
    fn pursuit_examples() {
        assert_eq!(pure_pursuit(&peak(0.0), 0.1, 2.84), 0.0);
        assert_abs_diff_eq!(pure_pursuit(&peak(0.3), 0.1, 2.84), 0.03, epsilon = 1e-16);
        assert_eq!(pure_pursuit(&peak(3.0), 10.0, 2.84), 2.84);
        assert_eq!(pure_pursuit(&peak(-3.0), 10.0, 2.84), -2.84);
    }

    #[test]
    fn camouflage_rigid_geometry() {
        let a = AgentState::new(0.0, 0.0, 0.4, 0.2);
        let b = AgentState::new(1.0, 2.0, 0.4, 0.2);
        assert_abs_diff_eq!(
            motion_camouflage(&a, &b, 1.0, 0.05, 2.84),
            0.0,
            epsilon = 1e-16
        );
        assert_abs_diff_eq!(los_rate(&a, &b, 0.05), 0.0, epsilon = 1e-16);
        // Viewer closing head-on on a stationary target.
        let a = AgentState::new(0.0, 0.0, 0.0, 1.0);
        let b = AgentState::new(1.0, 0.0, 0.0, 0.0);
        assert_eq!(motion_camouflage(&a, &b, 1.0, 0.05, 2.84), 0.0);
    }

    #[test]
    fn camouflage_lateral_motion() {
        // Target at unit distance straight ahead moving sideways at 0.1 m/s.
        let a = AgentState::new(0.0, 0.0, 0.0, 0.0);
        let b = AgentState::new(1.0, 0.0, core::f64::consts::FRAC_PI_2, 0.1);
        let w = motion_camouflage(&a, &b, 1.0, 0.05, 2.84);
        assert_abs_diff_eq!(w.abs(), 0.1, epsilon = 1e-15);
        // Finite-difference oracle on the LOS angle.
        let h = 1e-6;
        let step = |s: &AgentState, dt: f64| {
            let (vx, vy) = s.velocity();
            AgentState {
                x: s.x + vx * dt,
                y: s.y + vy * dt,
                ..*s
            }
        };
        let fd = (relative_geometry(&step(&a, h), &step(&b, h)).theta_t
            - relative_geometry(&step(&a, -h), &step(&b, -h)).theta_t)
            / (2.0 * h);
        assert_abs_diff_eq!(w, fd, epsilon = 1e-8);
    }

    #[test]
    fn camouflage_saturates() {
        let a = AgentState::new(0.0, 0.0, 0.0, 0.0);
        let b = AgentState::new(0.1, 0.0, 1.5, 10.0);
        assert_eq!(motion_camouflage(&a, &b, 5.0, 0.05, 2.84).abs(), 2.84);
    }

    #[test]
    fn vicsek_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lonely = SwarmState::new(
            0.0,
            vec![
                AgentState::new(0.0, 0.0, 1.2, 0.1),
                AgentState::new(50.0, 0.0, -2.0, 0.1),
            ],
        );
        assert_abs_diff_eq!(
            vicsek_heading(&lonely, 0, 1.0, 0.0, &mut rng),
            1.2,
            epsilon = 1e-15
        );

        let sym = SwarmState::new(
            0.0,
            vec![
                AgentState::new(0.0, 0.0, 0.0, 0.1),
                AgentState::new(0.5, 0.0, 0.2, 0.1),
                AgentState::new(-0.5, 0.0, -0.2, 0.1),
            ],
        );
        assert_abs_diff_eq!(
            vicsek_heading(&sym, 0, 1.0, 0.0, &mut rng),
            0.0,
            epsilon = 1e-15
        );

        let aligned = SwarmState::new(
            0.0,
            (0..6)
                .map(|i| AgentState::new(i as f64 * 0.3, 0.0, -0.7, 0.1))
                .collect(),
        );
        for i in 0..6 {
            assert_abs_diff_eq!(
                vicsek_heading(&aligned, i, 1.0, 0.0, &mut rng),
                -0.7,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn vicsek_noise_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = SwarmState::new(0.0, vec![AgentState::new(0.0, 0.0, 0.0, 0.1); 2]);
        for _ in 0..1000 {
            let h = vicsek_heading(&s, 0, 1.0, 0.4, &mut rng);
            assert!(h.abs() <= 0.2);
        }
    }

    #[test]
    fn cs_consensus_and_antisymmetry() {
        let same = SwarmState::new(
            0.0,
            (0..4)
                .map(|i| AgentState::new(i as f64, -(i as f64), 0.9, 0.3))
                .collect(),
        );
        for i in 0..4 {
            assert_eq!(cucker_smale_accel(&same, i, 1.0, 0.5), (0.0, 0.0));
        }
        let pair = SwarmState::new(
            0.0,
            vec![
                AgentState::new(0.0, 0.0, 0.3, 0.5),
                AgentState::new(1.0, 1.0, 0.3 + PI, 0.5),
            ],
        );
        let a0 = cucker_smale_accel(&pair, 0, 1.0, 0.5);
        let a1 = cucker_smale_accel(&pair, 1, 1.0, 0.5);
        assert_abs_diff_eq!(a0.0, -a1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a0.1, -a1.1, epsilon = 1e-15);
    }

    #[test]
    fn cs_weight_values() {
        assert_eq!(cs_weight(0.0, 0.5), 1.0);
        assert_abs_diff_eq!(cs_weight(1.0, 0.5), 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(cs_weight(2.0, 1.0), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn wfi_empty_and_symmetric() {
        assert_eq!(wfi_projection(&[0.0; 16]), 0.0);
        // Even ring about γ = 0: bins k and n−1−k mirror each other.
        let n = 24;
        let ring: Vec<f64> = (0..n)
            .map(|k| {
                let m = k.min(n - 1 - k) as f64;
                1.0 + m * m
            })
            .collect();
        assert_abs_diff_eq!(wfi_projection(&ring), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn wfi_single_bin_at_quarter_turn() {
        // Oracle: ∫ q·1[bin] sin γ dγ over the bin, divided by π, equals
        // q(cos a − cos b)/π exactly; the midpoint rule approximates it.
        let n = 36;
        let q = 0.7;
        let width = TAU / n as f64;
        let mut ring = vec![0.0; n];
        let bin = ring_bin(PI / 2.0, n);
        ring[bin] = q;
        let lo = -PI + bin as f64 * width;
        let hi = lo + width;
        let exact = q * (libm::cos(lo) - libm::cos(hi)) / PI;
        let got = wfi_projection(&ring);
        assert_abs_diff_eq!(got, exact, epsilon = exact.abs() * width * width);
        let mid = -PI + (bin as f64 + 0.5) * width;
        assert_abs_diff_eq!(got, q * width * libm::sin(mid) / PI, epsilon = 1e-15);
        assert!((got - q * width / PI).abs() < q * width / PI * 0.01);
    }

    #[test]
    fn ring_bins_cover_the_circle() {
        assert_eq!(ring_bin(-PI + 1e-12, 8), 0);
        assert_eq!(ring_bin(PI, 8), 7);
        assert_eq!(ring_bin(0.0, 8), 4);
    }

    fn arb_state() -> impl Strategy<Value = AgentState> {
        (
            -3.0f64..3.0,
            -3.0f64..3.0,
            -3.1f64..3.1,
            0.0f64..1.0,
            -1.0f64..1.0,
        )
            .prop_map(|(x, y, t, v, w)| AgentState::new(x, y, t, v).with_omega(w))
    }

    proptest! {
        #[test]
        fn pursuit_is_odd_and_bounded(az in -PI..PI, k in 0.01f64..10.0) {
            let up = pure_pursuit(&peak(az), k, 2.84);
            let down = pure_pursuit(&peak(-az), k, 2.84);
            prop_assert_eq!(up, -down);
            prop_assert!(up.abs() <= 2.84);
        }

        #[test]
        fn camouflage_tracks_finite_difference_los_rate(a in arb_state(), b in arb_state(), k in 0.01f64..2.0) {
            let r = libm::hypot(a.x - b.x, a.y - b.y);
            prop_assume!(r > 0.2);
            let dt = 1e-4;
            let adv = |s: &AgentState| {
                let (vx, vy) = s.velocity();
                AgentState { x: s.x + vx * dt, y: s.y + vy * dt, ..*s }
            };
            let fd = wrap_angle(
                relative_geometry(&adv(&a), &adv(&b)).theta_t - relative_geometry(&a, &b).theta_t,
            ) / dt;
            let w = motion_camouflage(&a, &b, k, 0.05, 1e9);
            // Forward difference is first-order accurate.
            let scale = (a.v + b.v) / r;
            prop_assert!((w - k * fd).abs() <= k * 10.0 * dt * scale * scale + 1e-9);
            prop_assert!((w - k * los_rate(&a, &b, 0.05)).abs() < 1e-12);
        }

        #[test]
        fn cs_conserves_momentum(
            agents in prop::collection::vec(arb_state(), 5),
            strength in 0.1f64..5.0, beta in 0.0f64..2.0,
        ) {
            let s = SwarmState::new(0.0, agents);
            let (mut sx, mut sy) = (0.0, 0.0);
            for i in 0..5 {
                let (ax, ay) = cucker_smale_accel(&s, i, strength, beta);
                sx += ax;
                sy += ay;
            }
            prop_assert!(sx.abs() < 1e-10 && sy.abs() < 1e-10);
        }

        #[test]
        fn all_controllers_are_bounded(
            agents in prop::collection::vec(arb_state(), 2..7),
            k in 0.01f64..50.0, omega_max in 0.1f64..3.0,
        ) {
            let s = SwarmState::new(0.0, agents);
            for i in 0..s.len() {
                let j = (i + 1) % s.len();
                let g = relative_geometry(&s.agents[i], &s.agents[j]).gamma_a;
                let out = StmdOutput { peak_magnitude: 0.0, peak_azimuth: g, target_id: j };
                for w in [
                    pure_pursuit(&out, k, omega_max),
                    motion_camouflage(&s.agents[i], &s.agents[j], k, 0.05, omega_max),
                    wfi_feedback(&s, i, k, 0.05, 16, omega_max),
                ] {
                    prop_assert!(w.is_finite() && w.abs() <= omega_max);
                }
            }
        }
    }
}
