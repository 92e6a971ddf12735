//! Average-dwell-time supervision of target switching.
//!
//! A switching signal has average dwell time `N_a` if the number of switches
//! on any interval `[t̲, t)` satisfies `N_σ(t, t̲) ≤ N_0 + (t − t̲)/N_a`. Each
//! agent owns one [`DwellTimeLedger`] and asks it before changing target.

use alloc::vec::Vec;

use crate::error::ConfigError;
use crate::math;

/// Which intervals are checked when a switch is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WindowMode {
    /// Every interval starting at the run start or at a recorded switch.
    /// Sufficient for the bound to hold on every interval.
    #[default]
    Sliding,
    /// Only the interval starting at the run start.
    Global,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct DwellTimeConfig {
    #[cfg_attr(feature = "serde", serde(default = "defaults::mu_k"))]
    pub mu_k: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::lambda"))]
    pub lambda: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::epsilon"))]
    pub epsilon: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::n0"))]
    pub n0: f64,
    #[cfg_attr(feature = "serde", serde(default = "defaults::enforce"))]
    pub enforce: bool,
    /// Use this value instead of `ln μ / (λ − ε)`.
    #[cfg_attr(feature = "serde", serde(default))]
    pub average_dwell_time: Option<f64>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub window: WindowMode,
}

mod defaults {
    pub fn mu_k() -> f64 {
        10.0
    }
    pub fn lambda() -> f64 {
        1.0
    }
    pub fn epsilon() -> f64 {
        0.3
    }
    pub fn n0() -> f64 {
        1.0
    }
    pub fn enforce() -> bool {
        true
    }
}

impl Default for DwellTimeConfig {
    fn default() -> Self {
        Self {
            mu_k: defaults::mu_k(),
            lambda: defaults::lambda(),
            epsilon: defaults::epsilon(),
            n0: defaults::n0(),
            enforce: defaults::enforce(),
            average_dwell_time: None,
            window: WindowMode::default(),
        }
    }
}

impl DwellTimeConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, v) in [
            ("mu_k", self.mu_k),
            ("lambda", self.lambda),
            ("epsilon", self.epsilon),
            ("n0", self.n0),
        ] {
            if !v.is_finite() {
                return Err(ConfigError::NonFinite { field });
            }
        }
        if self.mu_k < 1.0 {
            return Err(ConfigError::MuBelowOne(self.mu_k));
        }
        if self.lambda <= 0.0 {
            return Err(ConfigError::NonPositive {
                field: "lambda",
                value: self.lambda,
            });
        }
        if !(self.epsilon > 0.0 && self.epsilon < self.lambda) {
            return Err(ConfigError::EpsilonOutOfRange {
                epsilon: self.epsilon,
                lambda: self.lambda,
            });
        }
        if self.n0 < 1.0 {
            return Err(ConfigError::N0BelowOne(self.n0));
        }
        if let Some(na) = self.average_dwell_time {
            crate::error::check_nonnegative("average_dwell_time", na)?;
        }
        Ok(())
    }
}

/// Lower bound `N̄_a = ln μ(k) / (λ − ε)` on the average dwell time, or the
/// configured override.
pub fn min_average_dwell_time(cfg: &DwellTimeConfig) -> Result<f64, ConfigError> {
    cfg.validate()?;
    Ok(match cfg.average_dwell_time {
        Some(na) => na,
        None => math::ln(cfg.mu_k) / (cfg.lambda - cfg.epsilon),
    })
}

/// `count ≤ n0 + span / na`, evaluated as `(count − n0)·na ≤ span` so that a
/// zero dwell time admits everything.
///
/// Shared by the online check and the post-run validator so both evaluate the
/// same floating-point expression.
#[inline]
pub fn window_admits(count: usize, span: f64, n0: f64, na: f64) -> bool {
    (count as f64 - n0) * na <= span
}

/// Switch accounting for one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct DwellTimeLedger {
    pub current_target: usize,
    pub window_start: f64,
    pub switch_times: Vec<f64>,
}

impl DwellTimeLedger {
    /// A ledger locked onto `initial_target`. Acquiring the first target is
    /// not counted as a switch.
    pub fn new(initial_target: usize, window_start: f64) -> Self {
        Self {
            current_target: initial_target,
            window_start,
            switch_times: Vec::new(),
        }
    }

    pub fn switch_count(&self) -> usize {
        self.switch_times.len()
    }

    /// Switches in `[window_start, t)`.
    pub fn switches_before(&self, t: f64) -> usize {
        self.switch_times.partition_point(|&s| s < t)
    }

    fn admits(&self, cfg: &DwellTimeConfig, na: f64, t: f64) -> bool {
        let m = self.switch_times.len();
        if !window_admits(m + 1, t - self.window_start, cfg.n0, na) {
            return false;
        }
        match cfg.window {
            WindowMode::Global => true,
            WindowMode::Sliding => self
                .switch_times
                .iter()
                .enumerate()
                .all(|(i, &s)| window_admits(m - i + 1, t - s, cfg.n0, na)),
        }
    }

    /// Asks to retarget onto `proposed` at time `t`. Returns whether the
    /// switch was accepted; the ledger only changes on acceptance.
    pub fn request_switch(
        &mut self,
        cfg: &DwellTimeConfig,
        na: f64,
        t: f64,
        proposed: usize,
    ) -> bool {
        debug_assert!(self.switch_times.last().is_none_or(|&s| t >= s));
        if proposed == self.current_target {
            return false;
        }
        if cfg.enforce && !self.admits(cfg, na, t) {
            return false;
        }
        // Two switches at the same instant would break strict ordering.
        if self.switch_times.last() == Some(&t) {
            return false;
        }
        self.switch_times.push(t);
        self.current_target = proposed;
        true
    }
}

/// Free-function form of [`DwellTimeLedger::request_switch`].
pub fn request_switch(
    ledger: &mut DwellTimeLedger,
    cfg: &DwellTimeConfig,
    t: f64,
    proposed: usize,
) -> Result<bool, ConfigError> {
    let na = min_average_dwell_time(cfg)?;
    Ok(ledger.request_switch(cfg, na, t, proposed))
}

/// `A(t) = (t − t̲) / max(N_σ(t), 1)` on each grid point: the realized average
/// dwell time, a sawtooth that drops at every switch.
pub fn average_dwell_time_series(ledger: &DwellTimeLedger, t_grid: &[f64]) -> Vec<f64> {
    t_grid
        .iter()
        .map(|&t| {
            // A switch at exactly t counts: the interval is closed on the right
            // in the limit t → t⁺ used by the plots.
            let n = ledger.switch_times.partition_point(|&s| s <= t).max(1);
            (t - ledger.window_start) / n as f64
        })
        .collect()
}

/// An interval on which the recorded switches exceed the dwell-time budget.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub window_start: f64,
    pub window_end: f64,
    pub switches: usize,
}

/// Checks the bound on every interval `[s_i, s_j⁺]` between recorded switches
/// and on every interval starting at `window_start`. Returns all violations.
pub fn validate_switch_times(
    switch_times: &[f64],
    window_start: f64,
    n0: f64,
    na: f64,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for (j, &end) in switch_times.iter().enumerate() {
        if !window_admits(j + 1, end - window_start, n0, na) {
            out.push(Violation {
                window_start,
                window_end: end,
                switches: j + 1,
            });
        }
        for (i, &start) in switch_times[..=j].iter().enumerate() {
            if !window_admits(j - i + 1, end - start, n0, na) {
                out.push(Violation {
                    window_start: start,
                    window_end: end,
                    switches: j - i + 1,
                });
            }
        }
    }
    out
}
