//! Bi-agent pursuit error dynamics and their linearization.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::math;

/// Gains and `α = v μ` of the two-agent problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiAgentParams {
    pub k_a: f64,
    pub k_b: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
}

/// Right-hand side of the bearing error dynamics:
///
/// ```text
/// γ̇_a = α sin γ_a + α sin γ_b − K_a γ_a
/// γ̇_b = K_b γ_b − α sin γ_a − α sin γ_b
/// ```
pub fn biagent_error_rhs(gamma_a: f64, gamma_b: f64, p: &BiAgentParams) -> (f64, f64) {
    let s = p.alpha * (math::sin(gamma_a) + math::sin(gamma_b));
    (s - p.k_a * gamma_a, p.k_b * gamma_b - s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonZeroKb(pub f64);

/// Jacobian at the origin with the target flying straight (`K_b = 0`):
/// `[[α − K_a, α], [−α, −α]]`.
pub fn biagent_linearization(p: &BiAgentParams) -> Result<[[f64; 2]; 2], NonZeroKb> {
    if p.k_b != 0.0 {
        return Err(NonZeroKb(p.k_b));
    }
    Ok([[p.alpha - p.k_a, p.alpha], [-p.alpha, -p.alpha]])
}

/// Eigenvalues of a 2×2 matrix as roots of `s² − tr s + det`, sorted by
/// real then imaginary part.
pub fn eig2(m: &[[f64; 2]; 2]) -> [Complex; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let half = 0.5 * tr;
    let disc = half * half - det;
    let mut roots = if disc >= 0.0 {
        let sq = math::sqrt(disc);
        // Avoid cancellation: take the larger-magnitude root first.
        let big = if half >= 0.0 { half + sq } else { half - sq };
        let small = if big != 0.0 { det / big } else { 0.0 };
        [Complex::new(big, 0.0), Complex::new(small, 0.0)]
    } else {
        let sq = math::sqrt(-disc);
        [Complex::new(half, -sq), Complex::new(half, sq)]
    };
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
    roots
}

/// Both eigenvalues strictly in the open left half-plane.
pub fn is_hurwitz(eigs: &[Complex; 2]) -> bool {
    eigs.iter().all(|e| e.re < 0.0)
}

/// Classical RK4 on the error dynamics. Returns `(t, γ_a, γ_b)` samples at
/// every step, starting with the initial condition.
pub fn integrate_error_dynamics(
    p: &BiAgentParams,
    gamma0: (f64, f64),
    dt: f64,
    steps: usize,
) -> Vec<(f64, f64, f64)> {
    let f = |g: (f64, f64)| biagent_error_rhs(g.0, g.1, p);
    let mut out = Vec::with_capacity(steps + 1);
    let mut g = gamma0;
    out.push((0.0, g.0, g.1));
    for k in 0..steps {
        let k1 = f(g);
        let k2 = f((g.0 + 0.5 * dt * k1.0, g.1 + 0.5 * dt * k1.1));
        let k3 = f((g.0 + 0.5 * dt * k2.0, g.1 + 0.5 * dt * k2.1));
        let k4 = f((g.0 + dt * k3.0, g.1 + dt * k3.1));
        g = (
            g.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            g.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        out.push(((k + 1) as f64 * dt, g.0, g.1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn rhs_examples() {
        let p = BiAgentParams {
            k_a: 1.0,
            k_b: 0.0,
            alpha: 1.0,
        };
        assert_eq!(biagent_error_rhs(0.0, 0.0, &p), (0.0, 0.0));
        let (ga, _) = biagent_error_rhs(core::f64::consts::FRAC_PI_2, 0.0, &p);
        assert_abs_diff_eq!(ga, 1.0 - core::f64::consts::FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn rhs_matches_linearization_near_origin() {
        let p = BiAgentParams {
            k_a: 0.7,
            k_b: 0.0,
            alpha: 1.3,
        };
        let a = biagent_linearization(&p).unwrap();
        for &(ga, gb) in &[(1e-2, -2e-2), (3e-3, 1e-3), (-5e-2, 4e-2)] {
            let (fa, fb) = biagent_error_rhs(ga, gb, &p);
            let la = a[0][0] * ga + a[0][1] * gb;
            let lb = a[1][0] * ga + a[1][1] * gb;
            let cube = libm::pow(libm::fabs(ga).max(libm::fabs(gb)), 3.0);
            assert!((fa - la).abs() <= p.alpha * cube);
            assert!((fb - lb).abs() <= p.alpha * cube);
        }
    }

    #[test]
    fn linearization_requires_straight_target() {
        let p = BiAgentParams {
            k_a: 1.0,
            k_b: 0.2,
            alpha: 1.0,
        };
        assert_eq!(biagent_linearization(&p), Err(NonZeroKb(0.2)));
    }

    #[test]
    fn linearization_examples() {
        let m = biagent_linearization(&BiAgentParams {
            k_a: 0.0,
            k_b: 0.0,
            alpha: 1.0,
        })
        .unwrap();
        assert_eq!(m, [[1.0, 1.0], [-1.0, -1.0]]);
        let e = eig2(&m);
        assert_eq!(e, [Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)]);
        assert!(!is_hurwitz(&e));

        let m = biagent_linearization(&BiAgentParams {
            k_a: 2.0,
            k_b: 0.0,
            alpha: 1.0,
        })
        .unwrap();
        let e = eig2(&m);
        assert_abs_diff_eq!(e[0].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[0].im, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e[1].im, 1.0, epsilon = 1e-15);
        assert!(is_hurwitz(&e));
    }

    #[test]
    fn eig2_examples() {
        assert_eq!(eig2(&[[1.0, 0.0], [0.0, 1.0]]), [Complex::new(1.0, 0.0); 2]);
        assert_eq!(
            eig2(&[[0.0, 1.0], [-1.0, 0.0]]),
            [Complex::new(0.0, -1.0), Complex::new(0.0, 1.0)]
        );
        assert_eq!(
            eig2(&[[-1.0, 1.0], [-1.0, -1.0]]),
            [Complex::new(-1.0, -1.0), Complex::new(-1.0, 1.0)]
        );
        assert_eq!(
            eig2(&[[3.0, 0.0], [0.0, -2.0]]),
            [Complex::new(-2.0, 0.0), Complex::new(3.0, 0.0)]
        );
    }

    proptest! {
        #[test]
        fn stable_iff_positive_gain(k_a in -10.0f64..10.0, alpha in 0.01f64..10.0) {
            let m = biagent_linearization(&BiAgentParams { k_a, k_b: 0.0, alpha }).unwrap();
            let e = eig2(&m);
            // Characteristic polynomial s² + K_a s + K_a α.
            prop_assert_eq!(is_hurwitz(&e), k_a > 0.0);
            for root in e {
                let re = root.re * root.re - root.im * root.im + k_a * root.re + k_a * alpha;
                let im = 2.0 * root.re * root.im + k_a * root.im;
                let scale = 1.0 + k_a.abs() * (1.0 + alpha) + k_a * k_a;
                prop_assert!(re.abs() < 1e-12 * scale && im.abs() < 1e-12 * scale);
            }
        }
    }
}
