//! Circular statistics of agent headings.

use crate::math;

/// Resultant lengths below this are treated as a cancelled configuration
/// with no defined mean direction.
pub const UNDEFINED_MEAN_TOL: f64 = 1e-12;

fn resultant(headings: &[f64]) -> (f64, f64) {
    headings.iter().fold((0.0, 0.0), |(s, c), &th| {
        (s + math::sin(th), c + math::cos(th))
    })
}

/// `|Σ exp(iθ_j)| / N`: 1 when aligned, 0 when the headings cancel.
///
/// Panics on an empty slice.
pub fn polarization(headings: &[f64]) -> f64 {
    assert!(!headings.is_empty(), "polarization of an empty swarm");
    let (s, c) = resultant(headings);
    (math::hypot(s, c) / headings.len() as f64).min(1.0)
}

/// Circular mean direction and circular variance `1 − polarization`.
///
/// The mean is `None` when the resultant vanishes.
pub fn circular_mean_and_variance(headings: &[f64]) -> (Option<f64>, f64) {
    assert!(
        !headings.is_empty(),
        "circular statistics of an empty swarm"
    );
    let (s, c) = resultant(headings);
    let p = (math::hypot(s, c) / headings.len() as f64).min(1.0);
    let mean = (p > UNDEFINED_MEAN_TOL).then(|| math::atan2(s, c));
    (mean, 1.0 - p)
}

/// Population variance of unwrapped headings, for comparison with the
/// circular measure.
pub fn linear_variance(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}
